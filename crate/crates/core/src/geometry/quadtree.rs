use super::levelset::{LevelSet, Point, Rect};
use super::GeometryError;

/// Outcome of the sampled inside/outside test for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    Structure,
    Fluid,
    Cut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafTag {
    /// Entirely inside the structure (φ > 0).
    Inside,
    /// Entirely inside the fluid (φ < 0).
    Outside,
    CutAtMaxDepth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadLeaf {
    pub bounds: Rect,
    pub depth: usize,
    pub tag: LeafTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadTreePartition {
    pub root: Rect,
    pub max_depth: usize,
    pub leaves: Vec<QuadLeaf>,
}

/// Samples per edge used when classifying quadtree sub-cells.
pub const SUBCELL_SAMPLES: usize = 3;

pub(crate) fn sample(ls: &dyn LevelSet, p: Point) -> Result<f64, GeometryError> {
    let v = ls.value(p);
    if v.is_nan() {
        Err(GeometryError::InvalidValue { x: p[0], y: p[1] })
    } else {
        Ok(v)
    }
}

/// Samples φ on a `samples_per_edge`² tensor grid including the corners.
pub fn classify_cell(ls: &dyn LevelSet, bounds: &Rect, samples_per_edge: usize) -> Result<CellClass, GeometryError> {
    if bounds.is_degenerate() {
        return Err(GeometryError::DegenerateBounds);
    }
    let n = samples_per_edge.max(2);
    let (mut pos, mut neg) = (false, false);
    for j in 0..n {
        let y = lerp(bounds.min[1], bounds.max[1], j, n - 1);
        for i in 0..n {
            let x = lerp(bounds.min[0], bounds.max[0], i, n - 1);
            let v = sample(ls, [x, y])?;
            if v > 0.0 {
                pos = true;
            } else if v < 0.0 {
                neg = true;
            } else {
                pos = true;
                neg = true;
            }
        }
    }
    Ok(match (pos, neg) {
        (true, false) => CellClass::Structure,
        (false, true) => CellClass::Fluid,
        _ => CellClass::Cut,
    })
}

pub(crate) fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i == n {
        b
    } else {
        a + (b - a) * (i as f64 / n as f64)
    }
}

/// Recursive four-way bisection of cut leaves down to `max_depth`.
///
/// Leaves come out depth first, children ordered lower-left, lower-right,
/// upper-left, upper-right.
pub fn build_quadtree(
    ls: &dyn LevelSet,
    bounds: &Rect,
    max_depth: usize,
    samples_per_edge: usize,
) -> Result<QuadTreePartition, GeometryError> {
    let mut leaves = Vec::new();
    let mut stack = vec![(*bounds, 0usize)];
    while let Some((r, depth)) = stack.pop() {
        let class = classify_cell(ls, &r, samples_per_edge)?;
        match class {
            CellClass::Structure => leaves.push(QuadLeaf { bounds: r, depth, tag: LeafTag::Inside }),
            CellClass::Fluid => leaves.push(QuadLeaf { bounds: r, depth, tag: LeafTag::Outside }),
            CellClass::Cut if depth >= max_depth => {
                leaves.push(QuadLeaf { bounds: r, depth, tag: LeafTag::CutAtMaxDepth })
            }
            CellClass::Cut => {
                let q = r.quadrants();
                for child in q.iter().rev() {
                    stack.push((*child, depth + 1));
                }
            }
        }
    }
    Ok(QuadTreePartition { root: *bounds, max_depth, leaves })
}

/// Area of the structure (φ ≥ 0) inside `region`, measured like the
/// cut-cell quadrature does: quadtree leaves plus a tensor Gauss rule of
/// `n_gp` points per direction on leaves still cut at `max_depth`.
pub fn structure_area(
    ls: &dyn LevelSet,
    region: &Rect,
    cells: (usize, usize),
    max_depth: usize,
    n_gp: usize,
) -> Result<f64, GeometryError> {
    let rule = crate::basis::gauss_rule(n_gp).map_err(|_| GeometryError::DegenerateBounds)?;
    let hx = region.width() / cells.0 as f64;
    let hy = region.height() / cells.1 as f64;
    let mut area = 0.0;
    for j in 0..cells.1 {
        for i in 0..cells.0 {
            let cell = Rect::new(
                [region.min[0] + i as f64 * hx, region.min[1] + j as f64 * hy],
                [region.min[0] + (i + 1) as f64 * hx, region.min[1] + (j + 1) as f64 * hy],
            );
            let tree = build_quadtree(ls, &cell, max_depth, SUBCELL_SAMPLES)?;
            for leaf in &tree.leaves {
                match leaf.tag {
                    LeafTag::Inside => area += leaf.bounds.area(),
                    LeafTag::Outside => {}
                    LeafTag::CutAtMaxDepth => {
                        let jac = leaf.bounds.area() / 4.0;
                        for (a, wa) in rule.points.iter().zip(&rule.weights) {
                            for (b, wb) in rule.points.iter().zip(&rule.weights) {
                                if sample(ls, leaf.bounds.map([*a, *b]))? >= 0.0 {
                                    area += wa * wb * jac;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(area)
}
