use crate::basis::gauss_rule;
use crate::discretization::CellGrid;
use crate::geometry::InterfaceSegment;

use super::sparse::{CsrMatrix, TripletBuilder};
use super::AssemblyError;

/// Interface matrix `∫_Γ N_sᵀ n N_f` with structure dofs as rows and fluid
/// dofs as columns, using `n_gp_line` Gauss points per segment.
pub fn assemble_coupling(
    grid_s: &CellGrid,
    grid_f: &CellGrid,
    segments: &[InterfaceSegment],
    n_gp_line: usize,
) -> Result<CsrMatrix, AssemblyError> {
    if grid_s.n_components() != 2 || grid_f.n_components() != 1 {
        return Err(AssemblyError::DimensionMismatch(
            "coupling needs a two-component structure grid and a scalar fluid grid".into(),
        ));
    }
    let rule = gauss_rule(n_gp_line).map_err(|e| AssemblyError::DimensionMismatch(e.to_string()))?;
    let ns = grid_s.shapes().len();
    let nf = grid_f.shapes().len();
    let mut b = TripletBuilder::with_capacity(grid_s.dof_count(), grid_f.dof_count(), segments.len() * rule.len() * ns * nf * 2);
    let mut vs = Vec::new();
    let mut vf = Vec::new();
    for seg in segments {
        let half = 0.5 * seg.length();
        for (t, w) in rule.points.iter().zip(&rule.weights) {
            let s = 0.5 * (t + 1.0);
            let x = [seg.a[0] + s * (seg.b[0] - seg.a[0]), seg.a[1] + s * (seg.b[1] - seg.a[1])];
            let (cs, xs) = grid_s.locate(x).ok_or(AssemblyError::OutsideDomain(x[0], x[1]))?;
            let (cf, xf) = grid_f.locate(x).ok_or(AssemblyError::OutsideDomain(x[0], x[1]))?;
            grid_s.shapes().values_into(xs, &mut vs);
            grid_f.shapes().values_into(xf, &mut vf);
            let ds = grid_s.cell_scalar_dofs(cs);
            let df = grid_f.cell_scalar_dofs(cf);
            let wq = w * half;
            for (a, &ra) in ds.iter().enumerate() {
                for k in 0..2 {
                    let f = wq * vs[a] * seg.normal[k];
                    for (c, &col) in df.iter().enumerate() {
                        b.push(2 * ra + k, col, f * vf[c]);
                    }
                }
            }
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PolySpace;
    use crate::geometry::{extract_interface, FnLevelSet, Point, Rect};
    use approx::assert_relative_eq;

    fn grids(p: usize) -> (CellGrid, CellGrid) {
        let r = Rect::new([0.0, 0.0], [1.0, 1.0]);
        (
            CellGrid::covering(&r, (3, 3), p, PolySpace::Trunk, 2).unwrap(),
            CellGrid::covering(&r, (3, 3), p, PolySpace::Trunk, 1).unwrap(),
        )
    }

    fn vertical_interface(g: &CellGrid, x0: f64) -> Vec<InterfaceSegment> {
        // structure on the right, so n = (-1, 0)
        let ls = FnLevelSet(move |p: Point| p[0] - x0);
        (0..g.n_cells())
            .flat_map(|c| extract_interface(&ls, &g.cell_bounds(c), 10, c).unwrap())
            .collect()
    }

    #[test]
    fn vertical_line_column_sums() {
        let (gs, gf) = grids(1);
        let x0 = 0.55;
        let segs = vertical_interface(&gs, x0);
        let c = assemble_coupling(&gs, &gf, &segs, 2).unwrap();
        // Σ over structure x-rows gives -∫ N_f along the line, since Σ N_s = 1
        let mut ones_x = vec![0.0; gs.dof_count()];
        for s in 0..gs.scalar_dof_count() {
            ones_x[2 * s] = 1.0;
        }
        let mut col = vec![0.0; gf.dof_count()];
        c.mul_transpose_vec_into(&ones_x, &mut col);
        // oracle: hat functions integrated along x = x0 over the fluid grid
        let h = 1.0 / 3.0;
        let i = (x0 / h).floor() as usize;
        let t = (x0 - i as f64 * h) / h;
        for j in 0..=3 {
            let along = if j == 0 || j == 3 { h / 2.0 } else { h };
            assert_relative_eq!(col[gf.vertex_dof(i, j)], -(1.0 - t) * along, max_relative = 1e-12);
            assert_relative_eq!(col[gf.vertex_dof(i + 1, j)], -t * along, max_relative = 1e-12);
        }
        let total: f64 = col.iter().sum();
        assert_relative_eq!(total, -1.0, max_relative = 1e-12);
        // y rows carry nothing for a vertical interface
        let mut ones_y = vec![0.0; gs.dof_count()];
        for s in 0..gs.scalar_dof_count() {
            ones_y[2 * s + 1] = 1.0;
        }
        c.mul_transpose_vec_into(&ones_y, &mut col);
        assert!(col.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn empty_and_flipped() {
        let (gs, gf) = grids(2);
        assert_eq!(assemble_coupling(&gs, &gf, &[], 3).unwrap().nnz(), 0);
        let segs = vertical_interface(&gs, 0.4);
        let flipped: Vec<_> = segs.iter().map(|s| InterfaceSegment { normal: [-s.normal[0], -s.normal[1]], ..*s }).collect();
        let a = assemble_coupling(&gs, &gf, &segs, 3).unwrap();
        let b = assemble_coupling(&gs, &gf, &flipped, 3).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!((x.0, x.1), (y.0, y.1));
            assert_eq!(x.2, -y.2);
        }
    }

    #[test]
    fn outside_segment_rejected() {
        let (gs, gf) = grids(1);
        let seg = InterfaceSegment { a: [2.0, 0.0], b: [2.0, 1.0], normal: [1.0, 0.0], owner_cell: 0 };
        assert!(matches!(assemble_coupling(&gs, &gf, &[seg], 2), Err(AssemblyError::OutsideDomain(..))));
    }
}
