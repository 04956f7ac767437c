use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu};
use faer::{MatMut, Par, Side};

use crate::assembly::{CoupledSystem, CsrMatrix, TripletBuilder};

use super::TimeError;

fn sequential() {
    // bit-stable results do not survive a parallel factorization
    faer::set_global_parallelism(Par::Seq);
}

fn check_finite(b: &[f64]) -> Result<(), TimeError> {
    if b.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(TimeError::SingularEffectiveMatrix)
    }
}

/// Sparse LU of a general square matrix, factored once.
pub struct LuSolver {
    lu: Lu<usize, f64>,
    n: usize,
}

impl LuSolver {
    pub fn new(a: &CsrMatrix) -> Result<Self, TimeError> {
        sequential();
        let n = a.nrows();
        let lu = a.to_faer().sp_lu().map_err(|_| TimeError::SingularEffectiveMatrix)?;
        Ok(Self { lu, n })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<(), TimeError> {
        if self.n == 0 {
            return Ok(());
        }
        self.lu.solve_in_place(MatMut::from_column_major_slice_mut(b, self.n, 1));
        check_finite(b)
    }
}

/// Sparse Cholesky of a symmetric positive definite matrix.
pub struct CholeskySolver {
    llt: Llt<usize, f64>,
    n: usize,
}

impl CholeskySolver {
    pub fn new(a: &CsrMatrix) -> Result<Self, TimeError> {
        sequential();
        let n = a.nrows();
        let llt = a.to_faer().sp_cholesky(Side::Lower).map_err(|_| TimeError::SingularEffectiveMatrix)?;
        Ok(Self { llt, n })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<(), TimeError> {
        if self.n == 0 {
            return Ok(());
        }
        self.llt.solve_in_place(MatMut::from_column_major_slice_mut(b, self.n, 1));
        check_finite(b)
    }
}

/// Coupling strength `‖a_c S⁻¹ C‖` above which the full nonsymmetric matrix
/// is factored instead. The Schur iteration needs about `√(1 + ρ²)` times
/// more sweeps as `ρ` grows.
const MAX_CONTRACTION: f64 = 10.0;
const MAX_SWEEPS: usize = 500;

/// Principal submatrix over `range`.
fn principal_block(a: &CsrMatrix, range: std::ops::Range<usize>) -> CsrMatrix {
    let n = range.len();
    let mut b = TripletBuilder::new(n, n);
    for i in range.clone() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if range.contains(&j) {
                b.push(i - range.start, j - range.start, v);
            }
        }
    }
    b.build()
}

/// Factors of the two diagonal blocks `S_s`, `S_f` of `S = a_m M + a_k K`.
struct SchurParts {
    s: CholeskySolver,
    f: CholeskySolver,
    sf: CsrMatrix,
    a_c: f64,
}

impl SchurParts {
    /// `y_s = a_c ρ_f B x_f` with the coupling restricted to free dofs.
    fn to_structure(&self, sys: &CoupledSystem, xf: &[f64], ys: &mut [f64]) {
        let ns = sys.n_structure();
        let masked: Vec<f64> = xf.iter().enumerate().map(|(j, &v)| if sys.constrained[ns + j] { 0.0 } else { v }).collect();
        sys.coupling.mul_vec_into(&masked, ys);
        for (i, y) in ys.iter_mut().enumerate() {
            *y = if sys.constrained[i] { 0.0 } else { self.a_c * sys.fluid_density * *y };
        }
    }

    /// `y_f = a_c c² Bᵀ x_s`, the negated fluid-row coupling.
    fn to_fluid(&self, sys: &CoupledSystem, xs: &[f64], yf: &mut [f64]) {
        let ns = sys.n_structure();
        let masked: Vec<f64> = xs.iter().enumerate().map(|(i, &v)| if sys.constrained[i] { 0.0 } else { v }).collect();
        sys.coupling.mul_transpose_vec_into(&masked, yf);
        for (j, y) in yf.iter_mut().enumerate() {
            *y = if sys.constrained[ns + j] { 0.0 } else { self.a_c * sys.fluid_speed_sq * *y };
        }
    }

    /// `Bᵀ S_s⁻¹ B` term of the fluid Schur complement applied to `x_f`,
    /// scaled so that `T = S_f + coupled_term`.
    fn coupled_term(&self, sys: &CoupledSystem, xf: &[f64], out: &mut [f64]) -> Result<(), TimeError> {
        let mut ys = vec![0.0; sys.n_structure()];
        self.to_structure(sys, xf, &mut ys);
        self.s.solve_in_place(&mut ys)?;
        self.to_fluid(sys, &ys, out);
        Ok(())
    }

    /// Solves `[S_s, a_c C_s; a_c C_f, S_f] x = b` by conjugate gradients on
    /// the fluid Schur complement `T = S_f + a_c² ρ_f c² Bᵀ S_s⁻¹ B`, which
    /// is symmetric positive definite, preconditioned with `S_f`.
    fn solve(&self, sys: &CoupledSystem, b: &mut [f64]) -> Result<(), TimeError> {
        let ns = sys.n_structure();
        let (bs, bf) = b.split_at_mut(ns);
        let mut zs = bs.to_vec();
        self.s.solve_in_place(&mut zs)?;
        let mut g = vec![0.0; bf.len()];
        self.to_fluid(sys, &zs, &mut g);
        for (gi, &r) in g.iter_mut().zip(bf.iter()) {
            *gi += r;
        }

        let mut x = g.clone();
        self.f.solve_in_place(&mut x)?;
        // energy norm of the first iterate, the scale of the tolerance
        let scale: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        let tol = f64::EPSILON * f64::EPSILON * scale;
        // S_f x = g, so the residual is the coupling term alone
        let mut r = vec![0.0; x.len()];
        self.coupled_term(sys, &x, &mut r)?;
        r.iter_mut().for_each(|v| *v = -*v);
        let mut z = r.clone();
        self.f.solve_in_place(&mut z)?;
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut tp = vec![0.0; x.len()];
        let mut work = vec![0.0; x.len()];
        for _ in 0..MAX_SWEEPS {
            if rz <= tol {
                break;
            }
            self.sf.mul_vec_into(&p, &mut tp);
            self.coupled_term(sys, &p, &mut work)?;
            let mut ptp = 0.0;
            for i in 0..tp.len() {
                tp[i] += work[i];
                ptp += p[i] * tp[i];
            }
            if ptp <= 0.0 {
                break;
            }
            let alpha = rz / ptp;
            for i in 0..x.len() {
                x[i] += alpha * p[i];
                r[i] -= alpha * tp[i];
            }
            z.copy_from_slice(&r);
            self.f.solve_in_place(&mut z)?;
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..p.len() {
                p[i] = z[i] + beta * p[i];
            }
        }

        let mut couple = vec![0.0; ns];
        self.to_structure(sys, &x, &mut couple);
        for (v, c) in bs.iter_mut().zip(&couple) {
            *v -= c;
        }
        self.s.solve_in_place(bs)?;
        bf.copy_from_slice(&x);
        check_finite(b)
    }

    /// Power-iteration estimate of the spectral radius of `a_c S⁻¹ C`.
    fn contraction(&self, sys: &CoupledSystem) -> Result<f64, TimeError> {
        let ns = sys.n_structure();
        let nf = sys.n_fluid();
        let mut xf: Vec<f64> = (0..nf).map(|j| if sys.constrained[ns + j] { 0.0 } else { 1.0 + (j % 5) as f64 * 0.25 }).collect();
        let mut y = vec![0.0; nf];
        let mut rho = 0.0;
        // two Jacobi half-steps per pass: the fluid-to-fluid map has radius ρ²
        for _ in 0..12 {
            self.coupled_term(sys, &xf, &mut y)?;
            self.f.solve_in_place(&mut y)?;
            let nx = xf.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let ny = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if ny == 0.0 || nx == 0.0 {
                return Ok(0.0);
            }
            rho = (ny / nx).sqrt();
            let s = 1.0 / ny;
            xf.iter_mut().zip(&y).for_each(|(a, b)| *a = b * s);
        }
        Ok(rho)
    }
}

enum Strategy {
    /// `a_c C` vanishes: one Cholesky factor of `S`.
    Symmetric(CholeskySolver),
    Schur(Box<SchurParts>),
    Direct(Box<LuSolver>),
}

/// Solver for the effective matrix `a_m M + a_c C + a_k K` of a coupled
/// system.
///
/// `M` and `K` are symmetric and block diagonal per field while `C` only
/// couples the fields, with `C_f = -(c²/ρ_f) C_sᵀ`. Eliminating the
/// structure leaves a symmetric positive definite fluid system that
/// conjugate gradients solve in a few sweeps, each costing one solve with
/// each diagonal block. Very strong coupling, or blocks that are not
/// positive definite, go to a sparse LU of the full matrix.
pub struct EffectiveSolver {
    strategy: Strategy,
}

impl EffectiveSolver {
    pub fn new(sys: &CoupledSystem, a_m: f64, a_c: f64, a_k: f64) -> Result<Self, TimeError> {
        let sym = sys.combined(a_m, 0.0, a_k);
        if a_c == 0.0 || sys.coupling.nnz() == 0 {
            if let Ok(chol) = CholeskySolver::new(&sym) {
                return Ok(Self { strategy: Strategy::Symmetric(chol) });
            }
        } else {
            let ns = sys.n_structure();
            let ss = principal_block(&sym, 0..ns);
            let sf = principal_block(&sym, ns..sys.len());
            if let (Ok(s), Ok(f)) = (CholeskySolver::new(&ss), CholeskySolver::new(&sf)) {
                let parts = SchurParts { s, f, sf, a_c };
                if parts.contraction(sys)? <= MAX_CONTRACTION {
                    return Ok(Self { strategy: Strategy::Schur(Box::new(parts)) });
                }
            }
        }
        Ok(Self { strategy: Strategy::Direct(Box::new(LuSolver::new(&sys.combined(a_m, a_c, a_k))?)) })
    }

    /// True unless the full matrix was factored.
    pub fn is_split(&self) -> bool {
        !matches!(self.strategy, Strategy::Direct(_))
    }

    /// Solves in place; `b` must vanish at constrained dofs.
    pub fn solve_in_place(&self, sys: &CoupledSystem, b: &mut [f64]) -> Result<(), TimeError> {
        match &self.strategy {
            Strategy::Direct(lu) => lu.solve_in_place(b),
            Strategy::Symmetric(chol) => chol.solve_in_place(b),
            Strategy::Schur(parts) => parts.solve(sys, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_systems() {
        let mut b = TripletBuilder::new(3, 3);
        for (i, j, v) in [(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0), (2, 2, 2.0), (1, 2, 0.5), (2, 1, 0.5)] {
            b.push(i, j, v);
        }
        let a = b.build();
        let x = [1.0, -2.0, 0.5];
        let rhs = a.mul_vec(&x);
        let mut y = rhs.clone();
        LuSolver::new(&a).unwrap().solve_in_place(&mut y).unwrap();
        let mut z = rhs;
        CholeskySolver::new(&a).unwrap().solve_in_place(&mut z).unwrap();
        for i in 0..3 {
            assert!((y[i] - x[i]).abs() < 1e-14 && (z[i] - x[i]).abs() < 1e-14);
        }
    }

    fn diag(v: &[f64]) -> CsrMatrix {
        let mut b = TripletBuilder::new(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            b.push(i, i, x);
        }
        b.build()
    }

    fn coupled(scale: f64) -> CoupledSystem {
        let mut c = TripletBuilder::new(2, 2);
        c.push(0, 0, 0.7 * scale);
        c.push(1, 1, -0.3 * scale);
        c.push(1, 0, 0.2 * scale);
        CoupledSystem::new(diag(&[2.0, 3.0]), diag(&[5.0, 1.0]), diag(&[1.0, 4.0]), diag(&[2.0, 2.0]), c.build(), 1.2, 9.0, vec![0.0; 4], &[])
            .unwrap()
    }

    #[test]
    fn split_and_direct_agree_with_the_full_matrix() {
        for (scale, split) in [(1e-3, true), (1.0, true), (1e3, false)] {
            let sys = coupled(scale);
            let (a_m, a_c, a_k) = (1.0, 0.5, 0.25);
            let solver = EffectiveSolver::new(&sys, a_m, a_c, a_k).unwrap();
            assert_eq!(solver.is_split(), split);
            let x = [0.3, -1.0, 2.0, 0.5];
            let mut b = sys.combined(a_m, a_c, a_k).mul_vec(&x);
            solver.solve_in_place(&sys, &mut b).unwrap();
            for i in 0..4 {
                assert!((b[i] - x[i]).abs() < 1e-14, "{scale}: {b:?}");
            }
        }
    }

    #[test]
    fn indefinite_cholesky_fails() {
        let mut b = TripletBuilder::new(2, 2);
        b.push(0, 0, 1.0);
        b.push(1, 1, -1.0);
        assert!(matches!(CholeskySolver::new(&b.build()), Err(TimeError::SingularEffectiveMatrix)));
    }
}
