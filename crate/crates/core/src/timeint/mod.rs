//! Explicit central differences and the implicit trapezoidal rule for the
//! coupled second-order system.

mod central;
mod probe;
mod solver;
mod trapezoidal;

pub use central::central_difference_run;
pub use probe::{recover_pressure, PointProbe};
pub use solver::{CholeskySolver, EffectiveSolver, LuSolver};
pub use trapezoidal::trapezoidal_run;

use crate::assembly::CoupledSystem;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TimeError {
    #[error("singular effective matrix")]
    SingularEffectiveMatrix,
    #[error("singular effective matrix: dof {0} has no mass")]
    MasslessDof(usize),
    #[error("instability detected at step {step} (|u|max = {norm:e})")]
    Unstable { step: usize, norm: f64 },
    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),
    #[error("initial state has {0} entries, system has {1}")]
    InitialState(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    CentralDifference,
    Trapezoidal,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::CentralDifference => "central",
            Scheme::Trapezoidal => "trapezoidal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "central" => Some(Scheme::CentralDifference),
            "trapezoidal" => Some(Scheme::Trapezoidal),
            _ => None,
        }
    }
}

/// Uniform time axis `t_n = n dt`, `n = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    /// Steps of size `dt` covering `duration`, rounded to the nearest step.
    pub fn new(dt: f64, duration: f64) -> Result<Self, TimeError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(TimeError::InvalidTimeGrid("dt must be positive".into()));
        }
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(TimeError::InvalidTimeGrid("duration must be non-negative".into()));
        }
        let n = (duration / dt).round();
        if n > 1e9 {
            return Err(TimeError::InvalidTimeGrid("more than 1e9 steps".into()));
        }
        Ok(Self { dt, n_steps: n as usize })
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    pub fn duration(&self) -> f64 {
        self.time(self.n_steps)
    }
}

/// Displacement/potential and its rate at one recorded step.
#[derive(Debug, Clone, Copy)]
pub struct StepView<'a> {
    pub step: usize,
    pub t: f64,
    pub u: &'a [f64],
    pub v: &'a [f64],
}

/// Initial state; zeros when empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InitialState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl InitialState {
    fn resolve(&self, sys: &CoupledSystem) -> Result<(Vec<f64>, Vec<f64>), TimeError> {
        let n = sys.len();
        let take = |x: &Vec<f64>| -> Result<Vec<f64>, TimeError> {
            if x.is_empty() {
                Ok(vec![0.0; n])
            } else if x.len() != n {
                Err(TimeError::InitialState(x.len(), n))
            } else {
                let mut x = x.clone();
                for (v, &c) in x.iter_mut().zip(&sys.constrained) {
                    if c {
                        *v = 0.0;
                    }
                }
                Ok(x)
            }
        };
        Ok((take(&self.u)?, take(&self.v)?))
    }
}

pub(crate) fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// Acceleration `a0` from `M a0 = s(0) g - C v0 - K u0`.
pub(crate) fn initial_acceleration(
    sys: &CoupledSystem,
    s0: f64,
    u0: &[f64],
    v0: &[f64],
) -> Result<Vec<f64>, TimeError> {
    let n = sys.len();
    let mut rhs: Vec<f64> = sys.load.iter().map(|g| s0 * g).collect();
    let mut tmp = vec![0.0; n];
    sys.apply_coupling(v0, &mut tmp);
    rhs.iter_mut().zip(&tmp).for_each(|(r, t)| *r -= t);
    sys.apply_stiffness(u0, &mut tmp);
    rhs.iter_mut().zip(&tmp).for_each(|(r, t)| *r -= t);
    zero_constrained(sys, &mut rhs);
    if rhs.iter().all(|&v| v == 0.0) {
        return Ok(rhs);
    }
    let m = sys.combined(1.0, 0.0, 0.0);
    CholeskySolver::new(&m)?.solve_in_place(&mut rhs)?;
    Ok(rhs)
}

pub(crate) fn zero_constrained(sys: &CoupledSystem, x: &mut [f64]) {
    for (v, &c) in x.iter_mut().zip(&sys.constrained) {
        if c {
            *v = 0.0;
        }
    }
}

/// Divergence threshold: 1e12 times a generous bound on the response.
pub(crate) fn instability_threshold(
    sys: &CoupledSystem,
    solver: &EffectiveSolver,
    signal_peak: f64,
    duration: f64,
    u0: &[f64],
    v0: &[f64],
) -> Result<f64, TimeError> {
    let mut r = sys.load.clone();
    solver.solve_in_place(sys, &mut r)?;
    let forced = signal_peak * max_abs(&r) * duration * duration;
    let free = max_abs(u0) + max_abs(v0) * duration;
    Ok(1e12 * forced.max(free))
}

/// Rejects systems with a free dof that carries no mass.
pub(crate) fn check_mass(sys: &CoupledSystem) -> Result<(), TimeError> {
    match sys.massless_dof() {
        Some(d) => Err(TimeError::MasslessDof(d)),
        None => Ok(()),
    }
}

/// Largest ω with `K x = ω² M x` by power iteration, for choosing a stable
/// central-difference step (`dt < 2/ω`). Ignores the coupling.
pub fn estimate_max_frequency(sys: &CoupledSystem, iterations: usize) -> Result<f64, TimeError> {
    check_mass(sys)?;
    let m = sys.combined(1.0, 0.0, 0.0);
    let chol = CholeskySolver::new(&m)?;
    let n = sys.len();
    let mut x: Vec<f64> = (0..n).map(|i| if sys.constrained[i] { 0.0 } else { 1.0 + (i % 7) as f64 * 0.1 }).collect();
    let mut kx = vec![0.0; n];
    let mut lambda = 0.0;
    for _ in 0..iterations {
        sys.apply_stiffness(&x, &mut kx);
        zero_constrained(sys, &mut kx);
        chol.solve_in_place(&mut kx)?;
        let norm = max_abs(&kx);
        if norm == 0.0 {
            return Ok(0.0);
        }
        lambda = norm / max_abs(&x);
        x.iter_mut().zip(&kx).for_each(|(a, b)| *a = b / norm);
    }
    Ok(lambda.sqrt())
}
