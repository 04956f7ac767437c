use crate::basis::{gauss_rule, Rule1D};
use crate::geometry::{build_quadtree, classify_cell, extract_interface, CellClass, InterfaceSegment, LevelSet, Point, Rect, SUBCELL_SAMPLES};

use super::{CellGrid, DiscretizationError};

/// Which physical domain a quadrature set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Structure,
    Fluid,
}

impl Side {
    /// Indicator value at a point where the level set equals `phi`.
    /// φ = 0 belongs to the structure.
    pub fn alpha(self, phi: f64, alpha_min: f64) -> f64 {
        let in_structure = phi >= 0.0;
        match (self, in_structure) {
            (Side::Structure, true) | (Side::Fluid, false) => 1.0,
            _ => alpha_min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    /// Physical location.
    pub x: Point,
    /// Reference coordinates in the owning cell.
    pub xi: [f64; 2],
    /// Physical weight, m².
    pub weight: f64,
    pub alpha: f64,
}

/// Quadrature of one cell: either the plain tensor rule with a single
/// indicator value, or an explicit point list from the quadtree.
#[derive(Debug, Clone, PartialEq)]
pub enum CellQuadrature {
    Uncut { alpha: f64 },
    Cut(Vec<QuadPoint>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Quadtree depth for cut cells.
    pub depth: usize,
    /// Gauss points per direction on each cell or leaf.
    pub n_gp: usize,
    pub alpha_min: f64,
    /// Marching-squares resolution; cut detection uses `resolution + 1`
    /// samples per edge.
    pub resolution: usize,
}

impl QuadratureOptions {
    /// Depth p + 4 and p + 1 points, α_min = 1e-8, resolution 10.
    pub fn for_degree(p: usize) -> Self {
        Self { depth: p + 4, n_gp: p + 1, alpha_min: 1e-8, resolution: 10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSet {
    pub side: Side,
    pub rule: Rule1D,
    pub cells: Vec<CellQuadrature>,
    /// Interface pieces found in cut cells, owner is the cell index of this grid.
    pub segments: Vec<InterfaceSegment>,
}

impl QuadratureSet {
    /// Explicit points of `cell`, also for uncut cells.
    pub fn cell_points(&self, grid: &CellGrid, cell: usize) -> Vec<QuadPoint> {
        match &self.cells[cell] {
            CellQuadrature::Cut(p) => p.clone(),
            CellQuadrature::Uncut { alpha } => tensor_points(&self.rule, &grid.cell_bounds(cell), &grid.cell_bounds(cell), *alpha),
        }
    }

    pub fn n_cut(&self) -> usize {
        self.cells.iter().filter(|c| matches!(c, CellQuadrature::Cut(_))).count()
    }
}

fn tensor_points(rule: &Rule1D, leaf: &Rect, cell: &Rect, alpha: f64) -> Vec<QuadPoint> {
    let jac = leaf.area() / 4.0;
    let mut out = Vec::with_capacity(rule.len() * rule.len());
    for (b, wb) in rule.points.iter().zip(&rule.weights) {
        for (a, wa) in rule.points.iter().zip(&rule.weights) {
            let x = leaf.map([*a, *b]);
            out.push(QuadPoint { x, xi: reference(cell, x), weight: wa * wb * jac, alpha });
        }
    }
    out
}

fn reference(cell: &Rect, x: Point) -> [f64; 2] {
    [
        2.0 * (x[0] - cell.min[0]) / cell.width() - 1.0,
        2.0 * (x[1] - cell.min[1]) / cell.height() - 1.0,
    ]
}

/// Indicator-weighted quadrature for one field.
///
/// Uncut cells keep the plain tensor rule, cut cells get a tensor rule on
/// every quadtree leaf with α taken from the sign of φ at each point.
pub fn build_quadrature(
    grid: &CellGrid,
    ls: &dyn LevelSet,
    side: Side,
    opts: &QuadratureOptions,
) -> Result<QuadratureSet, DiscretizationError> {
    if opts.n_gp < grid.degree() + 1 {
        return Err(DiscretizationError::InvalidQuadrature(format!(
            "{} Gauss points cannot integrate degree {} products",
            opts.n_gp,
            grid.degree()
        )));
    }
    if !(opts.alpha_min >= 0.0 && opts.alpha_min <= 1.0) {
        return Err(DiscretizationError::InvalidQuadrature("alpha_min must lie in [0, 1]".into()));
    }
    let rule = gauss_rule(opts.n_gp).map_err(|e| DiscretizationError::InvalidQuadrature(e.to_string()))?;
    let mut cells = Vec::with_capacity(grid.n_cells());
    let mut segments = Vec::new();
    for cell in 0..grid.n_cells() {
        let bounds = grid.cell_bounds(cell);
        let q = match classify_cell(ls, &bounds, opts.resolution + 1)? {
            CellClass::Structure => CellQuadrature::Uncut { alpha: side.alpha(1.0, opts.alpha_min) },
            CellClass::Fluid => CellQuadrature::Uncut { alpha: side.alpha(-1.0, opts.alpha_min) },
            CellClass::Cut => {
                let tree = build_quadtree(ls, &bounds, opts.depth, SUBCELL_SAMPLES)?;
                let mut pts = Vec::new();
                for leaf in &tree.leaves {
                    for mut p in tensor_points(&rule, &leaf.bounds, &bounds, 1.0) {
                        let phi = ls.value(p.x);
                        if phi.is_nan() {
                            return Err(crate::geometry::GeometryError::InvalidValue { x: p.x[0], y: p.x[1] }.into());
                        }
                        p.alpha = side.alpha(phi, opts.alpha_min);
                        pts.push(p);
                    }
                }
                segments.extend(extract_interface(ls, &bounds, opts.resolution, cell)?);
                CellQuadrature::Cut(pts)
            }
        };
        cells.push(q);
    }
    Ok(QuadratureSet { side, rule, cells, segments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PolySpace;
    use crate::geometry::{CsgExpression, FnLevelSet};
    use proptest::prelude::*;

    fn grid10() -> CellGrid {
        CellGrid::covering(&Rect::new([0.0, 0.0], [0.1, 0.1]), (10, 10), 3, PolySpace::Trunk, 1).unwrap()
    }

    #[test]
    fn uncut_alpha_values() {
        let g = grid10();
        let fluid = FnLevelSet(|_| -1.0);
        let opts = QuadratureOptions::for_degree(3);
        let qf = build_quadrature(&g, &fluid, Side::Fluid, &opts).unwrap();
        assert!(qf.cells.iter().all(|c| *c == CellQuadrature::Uncut { alpha: 1.0 }));
        let qs = build_quadrature(&g, &fluid, Side::Structure, &opts).unwrap();
        assert!(qs.cells.iter().all(|c| *c == CellQuadrature::Uncut { alpha: 1e-8 }));
        assert!(qs.segments.is_empty());
    }

    #[test]
    fn disc_area() {
        let g = grid10();
        let r = 0.02;
        let disc = CsgExpression::disc([0.05, 0.05], r);
        let opts = QuadratureOptions { alpha_min: 0.0, ..QuadratureOptions::for_degree(3) };
        let q = build_quadrature(&g, &disc, Side::Structure, &opts).unwrap();
        let area: f64 = (0..g.n_cells())
            .flat_map(|c| q.cell_points(&g, c))
            .map(|p| p.weight * p.alpha)
            .sum();
        let exact = std::f64::consts::PI * r * r;
        assert!((area - exact).abs() / exact < 1e-3, "{area} {exact}");
        let len: f64 = q.segments.iter().map(|s| s.length()).sum();
        assert!((len - 2.0 * std::f64::consts::PI * r).abs() / (2.0 * std::f64::consts::PI * r) < 0.01);
    }

    #[test]
    fn too_few_points_rejected() {
        let g = grid10();
        let opts = QuadratureOptions { n_gp: 3, ..QuadratureOptions::for_degree(3) };
        assert!(build_quadrature(&g, &FnLevelSet(|_| 1.0), Side::Fluid, &opts).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_cell_area_and_alpha_follows_sign(
            cx in 0.0f64..0.1, cy in 0.0f64..0.1, r in 0.005f64..0.06, fluid in any::<bool>()
        ) {
            let g = CellGrid::covering(&Rect::new([0.0, 0.0], [0.1, 0.1]), (4, 4), 2, PolySpace::Trunk, 1).unwrap();
            let disc = CsgExpression::disc([cx, cy], r);
            let side = if fluid { Side::Fluid } else { Side::Structure };
            let opts = QuadratureOptions { depth: 4, ..QuadratureOptions::for_degree(2) };
            let q = build_quadrature(&g, &disc, side, &opts).unwrap();
            let mut total = 0.0;
            for c in 0..g.n_cells() {
                let pts = q.cell_points(&g, c);
                let s: f64 = pts.iter().map(|p| p.weight).sum();
                let area = g.cell_bounds(c).area();
                prop_assert!((s - area).abs() / area < 1e-12);
                total += s;
                if let CellQuadrature::Cut(_) = q.cells[c] {
                    for p in &pts {
                        let inside = disc.value(p.x) >= 0.0;
                        prop_assert_eq!(p.alpha == 1.0, inside != fluid);
                    }
                }
            }
            prop_assert!((total - 0.01).abs() / 0.01 < 1e-12);
        }
    }
}
