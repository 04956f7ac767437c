//! Text form of [`CsgExpression`], e.g.
//! `intersection(rect(0, 0, 1, 1), complement(disc(0.5, 0.5, 0.2)))`.

use super::levelset::{CsgExpression, MAX_CSG_DEPTH};

pub fn parse_csg(text: &str) -> Result<CsgExpression, String> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, text };
    let e = p.expr(0)?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(format!("unexpected trailing input at column {}", p.pos + 1));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected '{}' at column {}", c as char, self.pos + 1))
        }
    }

    fn ident(&mut self) -> Result<&str, String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format!("expected a CSG node name at column {}", start + 1));
        }
        Ok(&self.text[start..self.pos])
    }

    fn number(&mut self) -> Result<f64, String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !matches!(self.s[self.pos], b',' | b')') && !self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let tok = &self.text[start..self.pos];
        tok.parse::<f64>()
            .map_err(|_| format!("invalid number '{tok}' at column {}", start + 1))
    }

    fn numbers(&mut self, n: usize) -> Result<Vec<f64>, String> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(b',')?;
            }
            out.push(self.number()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn children(&mut self, depth: usize) -> Result<Vec<CsgExpression>, String> {
        self.expect(b'(')?;
        let mut out = vec![self.expr(depth + 1)?];
        loop {
            self.skip_ws();
            if self.pos < self.s.len() && self.s[self.pos] == b',' {
                self.pos += 1;
                out.push(self.expr(depth + 1)?);
            } else {
                break;
            }
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn expr(&mut self, depth: usize) -> Result<CsgExpression, String> {
        if depth > MAX_CSG_DEPTH {
            return Err(format!("expression nested deeper than {MAX_CSG_DEPTH}"));
        }
        let name = self.ident()?.to_ascii_lowercase();
        match name.as_str() {
            "halfplane" => {
                let v = self.numbers(4)?;
                Ok(CsgExpression::half_plane([v[0], v[1]], [v[2], v[3]]))
            }
            "disc" => {
                let v = self.numbers(3)?;
                Ok(CsgExpression::disc([v[0], v[1]], v[2]))
            }
            "rect" => {
                let v = self.numbers(4)?;
                Ok(CsgExpression::rect([v[0], v[1]], [v[2], v[3]]))
            }
            "union" => Ok(CsgExpression::Union(self.children(depth)?)),
            "intersection" => Ok(CsgExpression::Intersection(self.children(depth)?)),
            "complement" => {
                let mut c = self.children(depth)?;
                if c.len() != 1 {
                    return Err("complement takes exactly one member".into());
                }
                Ok(CsgExpression::complement(c.remove(0)))
            }
            other => Err(format!("unknown CSG node '{other}'")),
        }
    }
}
