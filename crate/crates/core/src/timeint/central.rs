use crate::assembly::CoupledSystem;

use super::{
    check_mass, initial_acceleration, instability_threshold, max_abs, zero_constrained, InitialState, EffectiveSolver, StepView,
    TimeError, TimeGrid,
};

/// Explicit central differences with the consistent mass matrix.
///
/// Each step solves `(M + dt/2 C) w = dt² (f_n - K u_n) - dt C (u_n - u_{n-1})`
/// and sets `u_{n+1} = 2 u_n - u_{n-1} + w`, which is the textbook update
/// written for the increment. Rates are `(u_{n+1} - u_{n-1}) / 2dt`, so the
/// observer for step `n` runs after `u_{n+1}` is known. `observe` is called
/// for every `n = 0..=n_steps`.
pub fn central_difference_run(
    sys: &CoupledSystem,
    tg: &TimeGrid,
    signal: &dyn Fn(f64) -> f64,
    init: &InitialState,
    mut observe: impl FnMut(StepView<'_>),
) -> Result<(), TimeError> {
    let n = sys.len();
    let dt = tg.dt;
    check_mass(sys)?;
    let (u0, v0) = init.resolve(sys)?;
    let a0 = initial_acceleration(sys, signal(0.0), &u0, &v0)?;
    let solver = EffectiveSolver::new(sys, 1.0, 0.5 * dt, 0.0)?;
    let peak = (0..=tg.n_steps + 1).map(|k| signal(tg.time(k)).abs()).fold(0.0, f64::max);
    let limit = instability_threshold(sys, &solver, peak, tg.duration() + dt, &u0, &v0)?;

    let mut u_prev: Vec<f64> = (0..n).map(|i| u0[i] - dt * v0[i] + 0.5 * dt * dt * a0[i]).collect();
    zero_constrained(sys, &mut u_prev);
    let mut u = u0;
    let mut u_next = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut diff = vec![0.0; n];
    let mut vel = vec![0.0; n];
    let inv2dt = 0.5 / dt;
    for step in 0..=tg.n_steps {
        let s = signal(tg.time(step));
        sys.apply_stiffness(&u, &mut tmp);
        for i in 0..n {
            rhs[i] = dt * dt * (s * sys.load[i] - tmp[i]);
            diff[i] = u[i] - u_prev[i];
        }
        sys.apply_coupling(&diff, &mut tmp);
        for i in 0..n {
            rhs[i] -= dt * tmp[i];
        }
        zero_constrained(sys, &mut rhs);
        solver.solve_in_place(sys, &mut rhs)?;
        for i in 0..n {
            u_next[i] = 2.0 * u[i] - u_prev[i] + rhs[i];
        }
        zero_constrained(sys, &mut u_next);
        let norm = max_abs(&u_next);
        if norm.is_nan() || norm > limit {
            return Err(TimeError::Unstable { step: step + 1, norm });
        }
        for i in 0..n {
            vel[i] = (u_next[i] - u_prev[i]) * inv2dt;
        }
        observe(StepView { step, t: tg.time(step), u: &u, v: &vel });
        std::mem::swap(&mut u_prev, &mut u);
        std::mem::swap(&mut u, &mut u_next);
    }
    Ok(())
}
