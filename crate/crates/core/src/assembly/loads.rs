use crate::basis::gauss_rule;
use crate::discretization::{CellGrid, GridSide, QuadratureSet, Side};
use crate::geometry::LevelSet;

use super::AssemblyError;

/// Indicator applied along a loaded boundary, so that loads only act on the
/// physical part of a side.
#[derive(Clone, Copy)]
pub struct BoundaryIndicator<'a> {
    pub level_set: &'a dyn LevelSet,
    pub side: Side,
    pub alpha_min: f64,
}

/// `∫ α N_a v_c` over one outer side of the grid, with `v` holding one value
/// per component. Scaled by a time signal this is the load vector.
pub fn assemble_boundary_load(
    grid: &CellGrid,
    side: GridSide,
    values: &[f64],
    indicator: Option<BoundaryIndicator<'_>>,
    n_gp: usize,
) -> Result<Vec<f64>, AssemblyError> {
    let nc = grid.n_components();
    if values.len() != nc {
        return Err(AssemblyError::DimensionMismatch(format!(
            "load has {} components, grid has {nc}",
            values.len()
        )));
    }
    let rule = gauss_rule(n_gp).map_err(|e| AssemblyError::DimensionMismatch(e.to_string()))?;
    let (nx, ny) = grid.cells();
    let h = grid.cell_size();
    let cells: Vec<usize> = match side {
        GridSide::Bottom => (0..nx).map(|i| grid.cell_index(i, 0)).collect(),
        GridSide::Top => (0..nx).map(|i| grid.cell_index(i, ny - 1)).collect(),
        GridSide::Left => (0..ny).map(|j| grid.cell_index(0, j)).collect(),
        GridSide::Right => (0..ny).map(|j| grid.cell_index(nx - 1, j)).collect(),
    };
    let (len, to_xi): (f64, fn(f64) -> [f64; 2]) = match side {
        GridSide::Bottom => (h[0], |t| [t, -1.0]),
        GridSide::Top => (h[0], |t| [t, 1.0]),
        GridSide::Left => (h[1], |t| [-1.0, t]),
        GridSide::Right => (h[1], |t| [1.0, t]),
    };
    let mut g = vec![0.0; grid.dof_count()];
    let mut vals = Vec::new();
    for cell in cells {
        let dofs = grid.cell_scalar_dofs(cell);
        let bounds = grid.cell_bounds(cell);
        for (t, w) in rule.points.iter().zip(&rule.weights) {
            let xi = to_xi(*t);
            let alpha = match &indicator {
                Some(ind) => {
                    let x = bounds.map(xi);
                    let phi = ind.level_set.value(x);
                    if phi.is_nan() {
                        return Err(crate::geometry::GeometryError::InvalidValue { x: x[0], y: x[1] }.into());
                    }
                    ind.side.alpha(phi, ind.alpha_min)
                }
                None => 1.0,
            };
            let wq = w * 0.5 * len * alpha;
            grid.shapes().values_into(xi, &mut vals);
            for (a, &s) in dofs.iter().enumerate() {
                for (c, v) in values.iter().enumerate() {
                    g[s * nc + c] += wq * vals[a] * v;
                }
            }
        }
    }
    Ok(g)
}

/// `∫ α N_a b_c` over the whole grid for a constant body term `b`.
pub fn assemble_body_load(grid: &CellGrid, quad: &QuadratureSet, values: &[f64]) -> Result<Vec<f64>, AssemblyError> {
    let nc = grid.n_components();
    if values.len() != nc || quad.cells.len() != grid.n_cells() {
        return Err(AssemblyError::DimensionMismatch("body load does not match the grid".into()));
    }
    let mut g = vec![0.0; grid.dof_count()];
    if values.iter().all(|&v| v == 0.0) {
        return Ok(g);
    }
    let mut vals = Vec::new();
    for cell in 0..grid.n_cells() {
        let dofs = grid.cell_scalar_dofs(cell);
        for p in quad.cell_points(grid, cell) {
            grid.shapes().values_into(p.xi, &mut vals);
            for (a, &s) in dofs.iter().enumerate() {
                for (c, v) in values.iter().enumerate() {
                    g[s * nc + c] += p.weight * p.alpha * vals[a] * v;
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PolySpace;
    use crate::discretization::{build_quadrature, QuadratureOptions};
    use crate::geometry::{FnLevelSet, Point, Rect};
    use approx::assert_relative_eq;

    fn grid(p: usize, nc: usize) -> CellGrid {
        CellGrid::covering(&Rect::new([0.0, 0.0], [0.3, 0.1]), (6, 2), p, PolySpace::Trunk, nc).unwrap()
    }

    #[test]
    fn traction_resultant() {
        let g = grid(1, 2);
        let n = GridSide::Left.outward_normal();
        let f = assemble_boundary_load(&g, GridSide::Left, &n, None, 2).unwrap();
        let fx: f64 = f.iter().step_by(2).sum();
        let fy: f64 = f.iter().skip(1).step_by(2).sum();
        assert_relative_eq!(fx, -0.1, max_relative = 1e-14);
        assert_eq!(fy, 0.0);
    }

    #[test]
    fn zero_traction() {
        let g = grid(2, 2);
        let f = assemble_boundary_load(&g, GridSide::Bottom, &[0.0, 0.0], None, 3).unwrap();
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fluid_flux_vertex_sum() {
        // only the vertex modes form a partition of unity along the edge
        let g = grid(3, 1);
        let f = assemble_boundary_load(&g, GridSide::Left, &[1.0], None, 4).unwrap();
        let vertex_sum: f64 = (0..=2).map(|j| f[g.vertex_dof(0, j)]).sum();
        assert_relative_eq!(vertex_sum, 0.1, max_relative = 1e-14);
        let g1 = grid(1, 1);
        let f1 = assemble_boundary_load(&g1, GridSide::Left, &[1.0], None, 2).unwrap();
        assert_relative_eq!(f1.iter().sum::<f64>(), 0.1, max_relative = 1e-14);
    }

    #[test]
    fn indicator_restricts_load() {
        let g = grid(1, 1);
        // fluid only below y = 0.05
        let ls = FnLevelSet(|p: Point| p[1] - 0.05);
        let ind = BoundaryIndicator { level_set: &ls, side: Side::Fluid, alpha_min: 0.0 };
        let f = assemble_boundary_load(&g, GridSide::Left, &[1.0], Some(ind), 2).unwrap();
        assert_relative_eq!(f.iter().sum::<f64>(), 0.05, max_relative = 1e-14);
    }

    #[test]
    fn body_load_total() {
        let g = grid(2, 2);
        let q = build_quadrature(&g, &FnLevelSet(|_| 1.0), Side::Structure, &QuadratureOptions::for_degree(2)).unwrap();
        let f = assemble_body_load(&g, &q, &[0.0, -9.81]).unwrap();
        let fy: f64 = (0..g.scalar_dof_count()).filter(|&s| s < 21).map(|s| f[2 * s + 1]).sum();
        assert_relative_eq!(fy, -9.81 * 0.03, max_relative = 1e-13);
    }
}
