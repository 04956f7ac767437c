use crate::assembly::CoupledSystem;

use super::{
    check_mass, initial_acceleration, instability_threshold, max_abs, zero_constrained, InitialState, EffectiveSolver, StepView,
    TimeError, TimeGrid,
};

const BETA: f64 = 0.25;
const GAMMA: f64 = 0.5;

/// Newmark average-acceleration (trapezoidal) rule, β = 1/4, γ = 1/2.
///
/// `observe` is called for every `n = 0..=n_steps` with the displacement and
/// velocity at `t_n`.
pub fn trapezoidal_run(
    sys: &CoupledSystem,
    tg: &TimeGrid,
    signal: &dyn Fn(f64) -> f64,
    init: &InitialState,
    mut observe: impl FnMut(StepView<'_>),
) -> Result<(), TimeError> {
    let n = sys.len();
    let dt = tg.dt;
    check_mass(sys)?;
    let (mut u, mut v) = init.resolve(sys)?;
    let mut a = initial_acceleration(sys, signal(0.0), &u, &v)?;
    let solver = EffectiveSolver::new(sys, 1.0, GAMMA * dt, BETA * dt * dt)?;
    let peak = (0..=tg.n_steps).map(|k| signal(tg.time(k)).abs()).fold(0.0, f64::max);
    let limit = instability_threshold(sys, &solver, peak, tg.duration() + dt, &u, &v)?;

    let mut u_pred = vec![0.0; n];
    let mut v_pred = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    observe(StepView { step: 0, t: 0.0, u: &u, v: &v });
    for step in 1..=tg.n_steps {
        let s = signal(tg.time(step));
        for i in 0..n {
            u_pred[i] = u[i] + dt * v[i] + (0.5 - BETA) * dt * dt * a[i];
            v_pred[i] = v[i] + (1.0 - GAMMA) * dt * a[i];
        }
        sys.apply_stiffness(&u_pred, &mut tmp);
        for i in 0..n {
            rhs[i] = s * sys.load[i] - tmp[i];
        }
        sys.apply_coupling(&v_pred, &mut tmp);
        for i in 0..n {
            rhs[i] -= tmp[i];
        }
        zero_constrained(sys, &mut rhs);
        solver.solve_in_place(sys, &mut rhs)?;
        std::mem::swap(&mut a, &mut rhs);
        for i in 0..n {
            u[i] = u_pred[i] + BETA * dt * dt * a[i];
            v[i] = v_pred[i] + GAMMA * dt * a[i];
        }
        zero_constrained(sys, &mut u);
        zero_constrained(sys, &mut v);
        let norm = max_abs(&u);
        if norm.is_nan() || norm > limit {
            return Err(TimeError::Unstable { step, norm });
        }
        observe(StepView { step, t: tg.time(step), u: &u, v: &v });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{CsrMatrix, TripletBuilder};

    fn scalar(v: f64) -> CsrMatrix {
        let mut b = TripletBuilder::new(1, 1);
        b.push(0, 0, v);
        b.build()
    }

    fn oscillator(m: f64, k: f64) -> CoupledSystem {
        CoupledSystem::new(
            scalar(m),
            scalar(k),
            CsrMatrix::zeros(0, 0),
            CsrMatrix::zeros(0, 0),
            CsrMatrix::zeros(1, 0),
            1.0,
            1.0,
            vec![1.0],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn no_amplitude_decay() {
        let w = 2.0 * std::f64::consts::PI;
        let sys = oscillator(1.0, w * w);
        let tg = TimeGrid { dt: 1e-3, n_steps: 100_000 };
        let init = InitialState { u: vec![1.0], v: vec![0.0] };
        let mut energy = Vec::new();
        trapezoidal_run(&sys, &tg, &|_| 0.0, &init, |s| energy.push(0.5 * s.v[0].powi(2) + 0.5 * w * w * s.u[0].powi(2)))
            .unwrap();
        let e0 = energy[0];
        assert!(energy.iter().all(|e| (e - e0).abs() / e0 < 1e-6));
    }

    #[test]
    fn zero_load_stays_zero() {
        let sys = oscillator(1.0, 4.0);
        let tg = TimeGrid { dt: 0.1, n_steps: 20 };
        trapezoidal_run(&sys, &tg, &|_| 0.0, &InitialState::default(), |s| assert_eq!(s.u[0], 0.0)).unwrap();
    }

    #[test]
    fn constant_load_oscillates_about_static_solution() {
        // u(t) = (f/k)(1 - cos ωt) for a suddenly applied load
        let sys = oscillator(1.0, 4.0);
        let tg = TimeGrid { dt: 1e-3, n_steps: 3000 };
        let mut last = (0.0, 0.0);
        trapezoidal_run(&sys, &tg, &|_| 1.0, &InitialState::default(), |s| last = (s.t, s.u[0])).unwrap();
        let exact = 0.25 * (1.0 - (2.0 * last.0).cos());
        assert!((last.1 - exact).abs() < 1e-5);
    }
}
