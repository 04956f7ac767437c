//! Marching squares on a regular sub-grid of one cell.

use super::levelset::{LevelSet, Point, Rect};
use super::quadtree::{lerp, sample};
use super::GeometryError;

/// Samples that are exactly zero are moved to the structure side by this much.
pub const ZERO_PERTURBATION: f64 = 1e-14;

/// Straight piece of the interface with the normal pointing out of the structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSegment {
    pub a: Point,
    pub b: Point,
    pub normal: [f64; 2],
    pub owner_cell: usize,
}

impl InterfaceSegment {
    pub fn length(&self) -> f64 {
        (self.b[0] - self.a[0]).hypot(self.b[1] - self.a[1])
    }

    pub fn midpoint(&self) -> Point {
        [0.5 * (self.a[0] + self.b[0]), 0.5 * (self.a[1] + self.b[1])]
    }
}

fn nudge(v: f64) -> f64 {
    if v == 0.0 {
        ZERO_PERTURBATION
    } else {
        v
    }
}

fn crossing(pa: Point, va: f64, pb: Point, vb: f64) -> Point {
    let t = va / (va - vb);
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

/// Unit normal pointing from φ > 0 to φ < 0 at `m`.
fn outward_normal(ls: &dyn LevelSet, m: Point, a: Point, b: Point, step: f64) -> Result<[f64; 2], GeometryError> {
    let g = match ls.gradient(m) {
        Some(g) => g,
        None => {
            let fx = (sample(ls, [m[0] + step, m[1]])? - sample(ls, [m[0] - step, m[1]])?) / (2.0 * step);
            let fy = (sample(ls, [m[0], m[1] + step])? - sample(ls, [m[0], m[1] - step])?) / (2.0 * step);
            [fx, fy]
        }
    };
    let len = g[0].hypot(g[1]);
    if len > 0.0 && len.is_finite() {
        return Ok([-g[0] / len, -g[1] / len]);
    }
    // flat φ: fall back to the segment perpendicular, oriented by sampling
    let d = [b[0] - a[0], b[1] - a[1]];
    let l = d[0].hypot(d[1]);
    let mut n = [d[1] / l, -d[0] / l];
    let plus = sample(ls, [m[0] + step * n[0], m[1] + step * n[1]])?;
    let minus = sample(ls, [m[0] - step * n[0], m[1] - step * n[1]])?;
    if plus > minus {
        n = [-n[0], -n[1]];
    }
    Ok(n)
}

/// Interface segments of one cell from marching squares on a
/// `resolution`×`resolution` sub-grid. Segments never leave `bounds`.
pub fn extract_interface(
    ls: &dyn LevelSet,
    bounds: &Rect,
    resolution: usize,
    owner_cell: usize,
) -> Result<Vec<InterfaceSegment>, GeometryError> {
    if bounds.is_degenerate() {
        return Err(GeometryError::DegenerateBounds);
    }
    let r = resolution.max(1);
    let n = r + 1;
    let mut pts = Vec::with_capacity(n * n);
    let mut vals = Vec::with_capacity(n * n);
    let (mut pos, mut neg) = (false, false);
    for j in 0..n {
        let y = lerp(bounds.min[1], bounds.max[1], j, r);
        for i in 0..n {
            let x = lerp(bounds.min[0], bounds.max[0], i, r);
            let v = nudge(sample(ls, [x, y])?);
            pos |= v > 0.0;
            neg |= v < 0.0;
            pts.push([x, y]);
            vals.push(v);
        }
    }
    let mut out = Vec::new();
    if !(pos && neg) {
        return Ok(out);
    }
    let size = bounds.width().max(bounds.height());
    let step = 1e-6 * size;
    let min_len = 1e-15 * size;
    for j in 0..r {
        for i in 0..r {
            let idx = [j * n + i, j * n + i + 1, (j + 1) * n + i + 1, (j + 1) * n + i];
            let v = idx.map(|k| vals[k]);
            let p = idx.map(|k| pts[k]);
            let case = (0..4).fold(0u8, |acc, k| acc | (((v[k] > 0.0) as u8) << k));
            if case == 0 || case == 15 {
                continue;
            }
            // edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3)
            let ends = [(0, 1), (1, 2), (3, 2), (0, 3)];
            let cross: [Option<Point>; 4] = ends.map(|(s, e)| {
                ((v[s] > 0.0) != (v[e] > 0.0)).then(|| crossing(p[s], v[s], p[e], v[e]))
            });
            let pairs: Vec<(usize, usize)> = match case {
                5 | 10 => {
                    let c = [0.5 * (p[0][0] + p[2][0]), 0.5 * (p[0][1] + p[2][1])];
                    let center_pos = nudge(sample(ls, c)?) > 0.0;
                    // separate the corners that are not connected through the center
                    let cut_c1_c3 = (case == 5) == center_pos;
                    if cut_c1_c3 {
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(3, 0), (1, 2)]
                    }
                }
                _ => {
                    let e: Vec<usize> = (0..4).filter(|&k| cross[k].is_some()).collect();
                    vec![(e[0], e[1])]
                }
            };
            for (ea, eb) in pairs {
                let (a, b) = (cross[ea].unwrap(), cross[eb].unwrap());
                let seg_len = (b[0] - a[0]).hypot(b[1] - a[1]);
                if seg_len <= min_len {
                    continue;
                }
                let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                let normal = outward_normal(ls, m, a, b, step)?;
                out.push(InterfaceSegment { a, b, normal, owner_cell });
            }
        }
    }
    Ok(out)
}
