use super::sparse::{CsrMatrix, TripletBuilder};
use super::AssemblyError;

/// Monolithic second-order system `M ü + C u̇ + K u = s(t) g` with the
/// structure displacements first and the fluid potential after them.
///
/// The damping-like operator is never stored: it is
/// `[0, ρ_f Ccoup; -c² Ccoupᵀ, 0]` applied from the single coupling matrix.
#[derive(Debug, Clone)]
pub struct CoupledSystem {
    pub ms: CsrMatrix,
    pub ks: CsrMatrix,
    pub mf: CsrMatrix,
    pub kf: CsrMatrix,
    /// Structure rows × fluid columns.
    pub coupling: CsrMatrix,
    pub fluid_density: f64,
    pub fluid_speed_sq: f64,
    /// Spatial load vector `g` over all dofs.
    pub load: Vec<f64>,
    /// Homogeneous Dirichlet flags over all dofs.
    pub constrained: Vec<bool>,
}

impl CoupledSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ms: CsrMatrix,
        ks: CsrMatrix,
        mf: CsrMatrix,
        kf: CsrMatrix,
        coupling: CsrMatrix,
        fluid_density: f64,
        fluid_speed_sq: f64,
        load: Vec<f64>,
        constrained_dofs: &[usize],
    ) -> Result<Self, AssemblyError> {
        let (ns, nf) = (ms.nrows(), mf.nrows());
        let square = |m: &CsrMatrix, n: usize| m.nrows() == n && m.ncols() == n;
        if !square(&ms, ns) || !square(&ks, ns) || !square(&mf, nf) || !square(&kf, nf) {
            return Err(AssemblyError::DimensionMismatch("system blocks are not square and matching".into()));
        }
        if coupling.nrows() != ns || coupling.ncols() != nf {
            return Err(AssemblyError::DimensionMismatch("coupling block does not match the fields".into()));
        }
        if load.len() != ns + nf {
            return Err(AssemblyError::DimensionMismatch("load vector does not match the system".into()));
        }
        let mut constrained = vec![false; ns + nf];
        for &d in constrained_dofs {
            *constrained
                .get_mut(d)
                .ok_or_else(|| AssemblyError::DimensionMismatch(format!("constrained dof {d} out of range")))? = true;
        }
        let mut load = load;
        for (g, &c) in load.iter_mut().zip(&constrained) {
            if c {
                *g = 0.0;
            }
        }
        Ok(Self { ms, ks, mf, kf, coupling, fluid_density, fluid_speed_sq, load, constrained })
    }

    pub fn n_structure(&self) -> usize {
        self.ms.nrows()
    }

    pub fn n_fluid(&self) -> usize {
        self.mf.nrows()
    }

    pub fn len(&self) -> usize {
        self.n_structure() + self.n_fluid()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn blockwise(&self, s: &CsrMatrix, f: &CsrMatrix, x: &[f64], y: &mut [f64]) {
        let ns = self.n_structure();
        let (xs, xf) = x.split_at(ns);
        let (ys, yf) = y.split_at_mut(ns);
        s.mul_vec_into(xs, ys);
        f.mul_vec_into(xf, yf);
    }

    pub fn apply_mass(&self, x: &[f64], y: &mut [f64]) {
        self.blockwise(&self.ms, &self.mf, x, y);
    }

    pub fn apply_stiffness(&self, x: &[f64], y: &mut [f64]) {
        self.blockwise(&self.ks, &self.kf, x, y);
    }

    /// `y = C x` with `C_s = ρ_f Ccoup` and `C_f = -c² Ccoupᵀ`.
    pub fn apply_coupling(&self, x: &[f64], y: &mut [f64]) {
        let ns = self.n_structure();
        let (xs, xf) = x.split_at(ns);
        let (ys, yf) = y.split_at_mut(ns);
        self.coupling.mul_vec_into(xf, ys);
        ys.iter_mut().for_each(|v| *v *= self.fluid_density);
        self.coupling.mul_transpose_vec_into(xs, yf);
        yf.iter_mut().for_each(|v| *v *= -self.fluid_speed_sq);
    }

    /// `a_m M + a_c C + a_k K` with constrained rows and columns replaced by
    /// the identity.
    pub fn combined(&self, a_m: f64, a_c: f64, a_k: f64) -> CsrMatrix {
        let ns = self.n_structure();
        let n = self.len();
        let mut b = TripletBuilder::with_capacity(
            n,
            n,
            self.ms.nnz() + self.mf.nnz() + 2 * self.coupling.nnz() + n,
        );
        let free = |i: usize, j: usize| !self.constrained[i] && !self.constrained[j];
        for (blk, off) in [(&self.ms, 0), (&self.mf, ns)] {
            if a_m != 0.0 {
                for (i, j, v) in blk.iter() {
                    if free(i + off, j + off) {
                        b.push(i + off, j + off, a_m * v);
                    }
                }
            }
        }
        for (blk, off) in [(&self.ks, 0), (&self.kf, ns)] {
            if a_k != 0.0 {
                for (i, j, v) in blk.iter() {
                    if free(i + off, j + off) {
                        b.push(i + off, j + off, a_k * v);
                    }
                }
            }
        }
        if a_c != 0.0 {
            for (i, j, v) in self.coupling.iter() {
                let (r, c) = (i, j + ns);
                if free(r, c) {
                    b.push(r, c, a_c * self.fluid_density * v);
                    b.push(c, r, -a_c * self.fluid_speed_sq * v);
                }
            }
        }
        for (i, &c) in self.constrained.iter().enumerate() {
            if c {
                b.push(i, i, 1.0);
            }
        }
        b.build()
    }

    /// First unconstrained dof whose mass row is entirely zero.
    pub fn massless_dof(&self) -> Option<usize> {
        let m = self.combined(1.0, 0.0, 0.0);
        (0..m.nrows()).find(|&i| !self.constrained[i] && m.row(i).1.iter().all(|&v| v == 0.0))
    }

    /// `½ vᵀ M v + ½ uᵀ K u` per field: (structure, fluid).
    pub fn energies(&self, u: &[f64], v: &[f64]) -> (f64, f64) {
        let ns = self.n_structure();
        let quad = |m: &CsrMatrix, x: &[f64]| -> f64 { 0.5 * m.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum::<f64>() };
        let es = quad(&self.ms, &v[..ns]) + quad(&self.ks, &u[..ns]);
        let ef = quad(&self.mf, &v[ns..]) + quad(&self.kf, &u[ns..]);
        (es, ef)
    }
}
