use crate::basis::ShapeSet2D;
use crate::discretization::{CellGrid, CellQuadrature, QuadratureSet};

use super::material::StructureMaterial;
use super::sparse::{CsrMatrix, TripletBuilder};
use super::AssemblyError;

/// Scalar moment matrices of one cell (row-major, `n × n`):
/// ∫ N_a N_b, ∫ ∂x N_a ∂x N_b, ∫ ∂x N_a ∂y N_b, ∫ ∂y N_a ∂y N_b.
#[derive(Debug, Clone)]
struct Moments {
    n: usize,
    mass: Vec<f64>,
    xx: Vec<f64>,
    xy: Vec<f64>,
    yy: Vec<f64>,
}

impl Moments {
    fn zeros(n: usize) -> Self {
        Self { n, mass: vec![0.0; n * n], xx: vec![0.0; n * n], xy: vec![0.0; n * n], yy: vec![0.0; n * n] }
    }

    /// Sums over `(xi, weight)` pairs; weights already include α.
    fn integrate(shapes: &ShapeSet2D, h: [f64; 2], points: impl Iterator<Item = ([f64; 2], f64)>) -> Self {
        let n = shapes.len();
        let mut m = Self::zeros(n);
        let (sx, sy) = (2.0 / h[0], 2.0 / h[1]);
        let mut sv = Default::default();
        let mut gx = vec![0.0; n];
        let mut gy = vec![0.0; n];
        for (xi, w) in points {
            if w == 0.0 {
                continue;
            }
            shapes.eval_into(xi, &mut sv);
            for a in 0..n {
                gx[a] = sv.gradients[a][0] * sx;
                gy[a] = sv.gradients[a][1] * sy;
            }
            for a in 0..n {
                let (va, xa, ya) = (w * sv.values[a], w * gx[a], w * gy[a]);
                let row = a * n;
                for b in a..n {
                    m.mass[row + b] += va * sv.values[b];
                    m.xx[row + b] += xa * gx[b];
                    m.yy[row + b] += ya * gy[b];
                }
                for b in 0..n {
                    m.xy[row + b] += xa * gy[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                m.mass[a * n + b] = m.mass[b * n + a];
                m.xx[a * n + b] = m.xx[b * n + a];
                m.yy[a * n + b] = m.yy[b * n + a];
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy)]
enum Operator<'a> {
    Mass(f64),
    Elastic(&'a StructureMaterial),
    Laplace(f64),
}

/// Dense local matrix in local dof order `l * ncomp + c`.
fn local_matrix(op: Operator<'_>, m: &Moments, nc: usize) -> Vec<f64> {
    let n = m.n;
    let nl = n * nc;
    let mut out = vec![0.0; nl * nl];
    match op {
        Operator::Mass(rho) => {
            for a in 0..n {
                for b in 0..n {
                    let v = rho * m.mass[a * n + b];
                    for c in 0..nc {
                        out[(a * nc + c) * nl + b * nc + c] = v;
                    }
                }
            }
        }
        Operator::Laplace(c2) => {
            for a in 0..n {
                for b in a..n {
                    let v = c2 * (m.xx[a * n + b] + m.yy[a * n + b]);
                    out[a * nl + b] = v;
                    out[b * nl + a] = v;
                }
            }
        }
        Operator::Elastic(mat) => {
            let d = mat.elasticity_matrix();
            let at = |v: &Vec<f64>, a: usize, b: usize| v[a * n + b];
            // upper triangle of the 2n × 2n matrix, mirrored below
            for i in 0..nl {
                for j in i..nl {
                    let (a, ca, b, cb) = (i / 2, i % 2, j / 2, j % 2);
                    let xx = at(&m.xx, a, b);
                    let yy = at(&m.yy, a, b);
                    let xy = at(&m.xy, a, b);
                    let yx = at(&m.xy, b, a);
                    let v = match (ca, cb) {
                        (0, 0) => d[0][0] * xx + d[0][2] * xy + d[2][0] * yx + d[2][2] * yy,
                        (0, _) => d[0][1] * xy + d[0][2] * xx + d[2][1] * yy + d[2][2] * yx,
                        (_, 0) => d[1][0] * yx + d[1][2] * yy + d[2][0] * xx + d[2][2] * xy,
                        _ => d[1][1] * yy + d[1][2] * yx + d[2][1] * xy + d[2][2] * xx,
                    };
                    out[i * nl + j] = v;
                    out[j * nl + i] = v;
                }
            }
        }
    }
    out
}

fn check(grid: &CellGrid, quad: &QuadratureSet) -> Result<(), AssemblyError> {
    if quad.cells.len() != grid.n_cells() {
        return Err(AssemblyError::DimensionMismatch(format!(
            "quadrature has {} cells, grid has {}",
            quad.cells.len(),
            grid.n_cells()
        )));
    }
    Ok(())
}

/// Assembles several cell operators in one sweep over the quadrature.
fn assemble(grid: &CellGrid, quad: &QuadratureSet, ops: &[Operator<'_>]) -> Result<Vec<CsrMatrix>, AssemblyError> {
    check(grid, quad)?;
    let h = grid.cell_size();
    let shapes = grid.shapes();
    let nc = grid.n_components();
    let ndof = grid.dof_count();
    let nl = shapes.len() * nc;
    // reference moments of an uncut cell with α = 1
    let rule = &quad.rule;
    let jac = h[0] * h[1] / 4.0;
    let reference = Moments::integrate(
        shapes,
        h,
        rule.points.iter().zip(&rule.weights).flat_map(|(&b, &wb)| {
            rule.points.iter().zip(&rule.weights).map(move |(&a, &wa)| ([a, b], wa * wb * jac))
        }),
    );
    let reference_local: Vec<Vec<f64>> = ops.iter().map(|&op| local_matrix(op, &reference, nc)).collect();
    let mut builders: Vec<TripletBuilder> =
        ops.iter().map(|_| TripletBuilder::with_capacity(ndof, ndof, grid.n_cells() * nl * nl)).collect();
    let mut scaled = vec![0.0; nl * nl];
    for cell in 0..grid.n_cells() {
        let dofs = grid.cell_dofs(cell);
        match &quad.cells[cell] {
            CellQuadrature::Uncut { alpha } => {
                for (b, local) in builders.iter_mut().zip(&reference_local) {
                    if *alpha == 1.0 {
                        b.add_dense(&dofs, local);
                    } else {
                        scaled.iter_mut().zip(local).for_each(|(s, v)| *s = v * alpha);
                        b.add_dense(&dofs, &scaled);
                    }
                }
            }
            CellQuadrature::Cut(points) => {
                let m = Moments::integrate(shapes, h, points.iter().map(|p| (p.xi, p.weight * p.alpha)));
                for (b, &op) in builders.iter_mut().zip(ops) {
                    b.add_dense(&dofs, &local_matrix(op, &m, nc));
                }
            }
        }
    }
    Ok(builders.into_iter().map(TripletBuilder::build).collect())
}

/// `Σ w α factor NᵀN`, block diagonal over components.
pub fn assemble_mass(grid: &CellGrid, quad: &QuadratureSet, density_factor: f64) -> Result<CsrMatrix, AssemblyError> {
    Ok(assemble(grid, quad, &[Operator::Mass(density_factor)])?.remove(0))
}

/// `Σ w α Bᵀ D B` for a two-component displacement grid.
pub fn assemble_stiffness_structure(
    grid: &CellGrid,
    quad: &QuadratureSet,
    mat: &StructureMaterial,
) -> Result<CsrMatrix, AssemblyError> {
    require_components(grid, 2)?;
    Ok(assemble(grid, quad, &[Operator::Elastic(mat)])?.remove(0))
}

/// `Σ w α c² GᵀG` for a scalar potential grid.
pub fn assemble_stiffness_fluid(grid: &CellGrid, quad: &QuadratureSet, wave_speed: f64) -> Result<CsrMatrix, AssemblyError> {
    require_components(grid, 1)?;
    Ok(assemble(grid, quad, &[Operator::Laplace(wave_speed * wave_speed)])?.remove(0))
}

/// Mass (scaled by the density) and stiffness of the structure in one sweep.
pub fn assemble_structure(
    grid: &CellGrid,
    quad: &QuadratureSet,
    mat: &StructureMaterial,
) -> Result<(CsrMatrix, CsrMatrix), AssemblyError> {
    require_components(grid, 2)?;
    let mut v = assemble(grid, quad, &[Operator::Mass(mat.density), Operator::Elastic(mat)])?;
    let k = v.pop().unwrap();
    Ok((v.pop().unwrap(), k))
}

/// Unscaled mass and `c²`-scaled stiffness of the fluid in one sweep.
pub fn assemble_fluid(grid: &CellGrid, quad: &QuadratureSet, wave_speed: f64) -> Result<(CsrMatrix, CsrMatrix), AssemblyError> {
    require_components(grid, 1)?;
    let mut v = assemble(grid, quad, &[Operator::Mass(1.0), Operator::Laplace(wave_speed * wave_speed)])?;
    let k = v.pop().unwrap();
    Ok((v.pop().unwrap(), k))
}

fn require_components(grid: &CellGrid, nc: usize) -> Result<(), AssemblyError> {
    if grid.n_components() != nc {
        return Err(AssemblyError::DimensionMismatch(format!(
            "expected {nc} components, grid has {}",
            grid.n_components()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::material::PlaneModel;
    use crate::basis::PolySpace;
    use crate::discretization::{build_quadrature, QuadratureOptions, Side};
    use crate::geometry::{CsgExpression, FnLevelSet, Point, Rect};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_grid(p: usize, nc: usize) -> CellGrid {
        CellGrid::new([0.0, 0.0], [1.0, 1.0], (1, 1), p, PolySpace::Trunk, nc).unwrap()
    }

    fn all_fluid(grid: &CellGrid, side: Side) -> QuadratureSet {
        build_quadrature(grid, &FnLevelSet(|_| -1.0), side, &QuadratureOptions::for_degree(grid.degree())).unwrap()
    }

    fn foam(model: PlaneModel) -> StructureMaterial {
        StructureMaterial { density: 50.0, youngs_modulus: 1e6, poisson_ratio: 0.3, model }
    }

    #[test]
    fn bilinear_mass() {
        let g = unit_grid(1, 1);
        let m = assemble_mass(&g, &all_fluid(&g, Side::Fluid), 1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (g.cell_scalar_dofs(0)[i], g.cell_scalar_dofs(0)[j]);
                let expected = match (i as i32 - j as i32).abs() {
                    0 => 1.0 / 9.0,
                    2 => 1.0 / 36.0,
                    _ => 1.0 / 18.0,
                };
                assert_relative_eq!(m.get(a, b), expected, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn bilinear_laplacian() {
        let g = unit_grid(1, 1);
        let k = assemble_stiffness_fluid(&g, &all_fluid(&g, Side::Fluid), 1.0).unwrap();
        let d = g.cell_scalar_dofs(0);
        for i in 0..4 {
            for j in 0..4 {
                let expected = match (i as i32 - j as i32).abs() {
                    0 => 2.0 / 3.0,
                    2 => -1.0 / 3.0,
                    _ => -1.0 / 6.0,
                };
                assert_relative_eq!(k.get(d[i], d[j]), expected, max_relative = 1e-14);
            }
        }
        let k2 = assemble_stiffness_fluid(&g, &all_fluid(&g, Side::Fluid), 2.0).unwrap();
        for (a, b) in k.iter().zip(k2.iter()) {
            assert_eq!(4.0 * a.2, b.2);
        }
    }

    #[test]
    fn fully_fictitious_with_zero_alpha_is_zero() {
        let g = unit_grid(2, 1);
        let opts = QuadratureOptions { alpha_min: 0.0, ..QuadratureOptions::for_degree(2) };
        let q = build_quadrature(&g, &FnLevelSet(|_| -1.0), Side::Structure, &opts).unwrap();
        assert_eq!(assemble_mass(&g, &q, 1.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn disc_total_mass() {
        let grid = CellGrid::covering(&Rect::new([0.0, 0.0], [0.1, 0.1]), (10, 10), 1, PolySpace::Trunk, 1).unwrap();
        let r = 0.02;
        let disc = CsgExpression::disc([0.05, 0.05], r);
        let opts = QuadratureOptions { depth: 7, n_gp: 4, alpha_min: 0.0, resolution: 10 };
        let q = build_quadrature(&grid, &disc, Side::Structure, &opts).unwrap();
        let rho = 50.0;
        let m = assemble_mass(&grid, &q, rho).unwrap();
        let total: f64 = m.iter().map(|e| e.2).sum();
        let exact = rho * std::f64::consts::PI * r * r;
        assert!((total - exact).abs() / exact < 1e-3);
    }

    #[test]
    fn dimension_checks() {
        let g = unit_grid(1, 1);
        let q = all_fluid(&g, Side::Fluid);
        assert!(assemble_stiffness_structure(&g, &q, &foam(PlaneModel::PlaneStress)).is_err());
        let g2 = CellGrid::new([0.0, 0.0], [1.0, 1.0], (2, 1), 1, PolySpace::Trunk, 1).unwrap();
        assert!(assemble_mass(&g2, &q, 1.0).is_err());
    }

    /// Coefficients of a field whose vertex values follow `f` and whose
    /// higher modes vanish; exact for affine fields.
    fn affine_coeffs(grid: &CellGrid, f: impl Fn(Point) -> [f64; 2]) -> Vec<f64> {
        let mut u = vec![0.0; grid.dof_count()];
        let (nx, ny) = grid.cells();
        for j in 0..=ny {
            for i in 0..=nx {
                let v = f(grid.vertex(i, j));
                let s = grid.vertex_dof(i, j);
                u[2 * s] = v[0];
                u[2 * s + 1] = v[1];
            }
        }
        u
    }

    #[test]
    fn uniaxial_patch_test() {
        let g = unit_grid(2, 2);
        let mat = foam(PlaneModel::PlaneStress);
        let k = assemble_stiffness_structure(&g, &all_fluid(&g, Side::Fluid), &mat).unwrap();
        let eps = 1e-3;
        let u = affine_coeffs(&g, |p| [eps * p[0], 0.0]);
        // strain energy ½ uᵀKu = ½ σ:ε · area with σxx = E/(1-ν²) εxx
        let ku = k.mul_vec(&u);
        let energy: f64 = 0.5 * u.iter().zip(&ku).map(|(a, b)| a * b).sum::<f64>();
        let sigma = mat.youngs_modulus / (1.0 - mat.poisson_ratio.powi(2)) * eps;
        assert_relative_eq!(energy, 0.5 * sigma * eps, max_relative = 1e-12);
        // boundary reaction on the right side x = 1 equals σxx × height
        let right: f64 = [g.vertex_dof(1, 0), g.vertex_dof(1, 1)].iter().map(|&s| ku[2 * s]).sum();
        assert_relative_eq!(right, sigma, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn rigid_motions_have_no_energy(
            tx in -1.0f64..1.0, ty in -1.0f64..1.0, w in -1.0f64..1.0, p in 1usize..=3, strain in any::<bool>(),
            cx in 0.0f64..2.0, cy in 0.0f64..2.0, r in 0.2f64..1.5
        ) {
            let g = CellGrid::new([0.0, 0.0], [0.5, 0.5], (4, 4), p, PolySpace::Trunk, 2).unwrap();
            let model = if strain { PlaneModel::PlaneStrain } else { PlaneModel::PlaneStress };
            let mat = foam(model);
            let disc = CsgExpression::disc([cx, cy], r);
            let q = build_quadrature(&g, &disc, Side::Structure, &QuadratureOptions { depth: 3, ..QuadratureOptions::for_degree(p) }).unwrap();
            let k = assemble_stiffness_structure(&g, &q, &mat).unwrap();
            prop_assert_eq!(k.max_asymmetry(), 0.0);
            let u = affine_coeffs(&g, |x| [tx - w * x[1], ty + w * x[0]]);
            let ku = k.mul_vec(&u);
            let scale = k.max_abs() * u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let worst = ku.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(worst <= 1e-10 * scale, "{} vs {}", worst, scale);
        }

        #[test]
        fn fluid_blocks_symmetric_and_constant_in_kernel(p in 1usize..=3, cx in 0.0f64..2.0, r in 0.2f64..1.5) {
            let g = CellGrid::new([0.0, 0.0], [0.5, 0.5], (4, 4), p, PolySpace::Trunk, 1).unwrap();
            let disc = CsgExpression::disc([cx, 1.0], r);
            let q = build_quadrature(&g, &disc, Side::Fluid, &QuadratureOptions { depth: 3, ..QuadratureOptions::for_degree(p) }).unwrap();
            let (m, k) = assemble_fluid(&g, &q, 287.0).unwrap();
            prop_assert_eq!(m.max_asymmetry(), 0.0);
            prop_assert_eq!(k.max_asymmetry(), 0.0);
            let mut psi = vec![0.0; g.dof_count()];
            for j in 0..=4 { for i in 0..=4 { psi[g.vertex_dof(i, j)] = 1.0; } }
            let kp = k.mul_vec(&psi);
            prop_assert!(kp.iter().all(|v| v.abs() <= 1e-12 * k.max_abs()));
        }
    }
}
