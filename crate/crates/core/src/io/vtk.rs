use std::fmt::Write;

use super::fmt_value;

/// A scalar field on a uniform lattice of `dims` points, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFields<'a> {
    pub title: String,
    pub dims: (usize, usize),
    pub origin: [f64; 2],
    pub spacing: [f64; 2],
    pub fields: Vec<(&'a str, Vec<f64>)>,
}

/// Legacy ASCII VTK with a STRUCTURED_POINTS dataset.
pub fn structured_points(data: &LatticeFields<'_>) -> String {
    let (nx, ny) = data.dims;
    let n = nx * ny;
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let title: String = data.title.chars().filter(|c| *c != '\n').take(255).collect();
    s.push_str(&title);
    s.push('\n');
    s.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {nx} {ny} 1");
    let _ = writeln!(s, "ORIGIN {} {} 0", fmt_value(data.origin[0]), fmt_value(data.origin[1]));
    let _ = writeln!(s, "SPACING {} {} 1", fmt_value(data.spacing[0]), fmt_value(data.spacing[1]));
    let _ = writeln!(s, "POINT_DATA {n}");
    for (name, values) in &data.fields {
        assert_eq!(values.len(), n, "field {name} does not match the lattice");
        let _ = writeln!(s, "SCALARS {name} double 1");
        s.push_str("LOOKUP_TABLE default\n");
        for v in values {
            s.push_str(&fmt_value(*v));
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal reader for the subset written above.
    fn parse(text: &str) -> (usize, Vec<(String, Vec<f64>)>) {
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# vtk DataFile Version 3.0"));
        lines.next();
        assert_eq!(lines.next(), Some("ASCII"));
        assert_eq!(lines.next(), Some("DATASET STRUCTURED_POINTS"));
        let dims: Vec<usize> = lines.next().unwrap().split_whitespace().skip(1).map(|v| v.parse().unwrap()).collect();
        assert!(lines.next().unwrap().starts_with("ORIGIN "));
        assert!(lines.next().unwrap().starts_with("SPACING "));
        let n: usize = lines.next().unwrap().strip_prefix("POINT_DATA ").unwrap().parse().unwrap();
        assert_eq!(n, dims.iter().product::<usize>());
        let mut fields = Vec::new();
        while let Some(l) = lines.next() {
            let name = l.split_whitespace().nth(1).unwrap().to_string();
            assert_eq!(lines.next(), Some("LOOKUP_TABLE default"));
            let v = (0..n).map(|_| lines.next().unwrap().parse().unwrap()).collect();
            fields.push((name, v));
        }
        (n, fields)
    }

    #[test]
    fn grammar_and_counts() {
        let data = LatticeFields {
            title: "snapshot t=0".into(),
            dims: (3, 2),
            origin: [0.0, 0.5],
            spacing: [0.1, 0.2],
            fields: vec![("pressure", vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]), ("velocity_potential", vec![-1.5; 6])],
        };
        let text = structured_points(&data);
        let (n, fields) = parse(&text);
        assert_eq!(n, 6);
        assert_eq!(fields[0].1, data.fields[0].1);
        assert_eq!(fields[1].0, "velocity_potential");
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }
}
