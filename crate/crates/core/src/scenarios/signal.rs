use std::f64::consts::PI;

/// Ricker wavelet `(1 - τ²) exp(-τ²/2)` with `τ = (t - t0)/σ`, `σ = t0/2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RickerSignal {
    pub t0: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

impl RickerSignal {
    pub fn new(t0: f64, amplitude: f64) -> Self {
        Self { t0, sigma: t0 / (2.0 * PI), amplitude }
    }

    pub fn value(&self, t: f64) -> f64 {
        ricker(t, self)
    }

    /// Earliest time at which `|p̄| ≥ fraction · |amplitude|`, found on a
    /// grid of `t0/10⁴` and refined by bisection.
    pub fn first_rise(&self, fraction: f64) -> f64 {
        let level = fraction * self.amplitude.abs();
        let above = |t: f64| self.value(t).abs() >= level;
        let step = self.t0 * 1e-4;
        let mut t = 0.0;
        while !above(t) {
            t += step;
        }
        if t == 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (t - step, t);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if above(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

pub fn ricker(t: f64, sig: &RickerSignal) -> f64 {
    let tau = (t - sig.t0) / sig.sigma;
    let tau2 = tau * tau;
    sig.amplitude * (1.0 - tau2) * (-0.5 * tau2).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_values() {
        let s = RickerSignal::new(1e-4, 1.0);
        assert_eq!(s.value(1e-4), 1.0);
        assert!(s.value(1e-4 + s.sigma).abs() < 1e-15);
        assert!(s.value(1e-4 - s.sigma).abs() < 1e-15);
        // τ = -2π at t = 0
        let four_pi2 = 4.0 * PI * PI;
        let expected = (1.0 - four_pi2) * (-0.5 * four_pi2).exp();
        assert!((s.value(0.0) - expected).abs() < 1e-12 * expected.abs());
        assert!((s.value(0.0) + 1.0294e-7).abs() < 1e-11);
    }

    #[test]
    fn first_rise_hits_the_level() {
        let s = RickerSignal::new(1e-4, 2.0);
        let t = s.first_rise(0.01);
        assert!((s.value(t).abs() - 0.02).abs() < 1e-9);
        assert!(t < s.t0 && t > 0.0);
        assert!((0..1000).all(|k| s.value(t * k as f64 / 1000.0).abs() < 0.02));
    }

    proptest! {
        #[test]
        fn tails_are_small(k in 6.0001f64..40.0, sign in prop::bool::ANY, a in 0.1f64..10.0) {
            let s = RickerSignal::new(1e-4, a);
            let t = s.t0 + if sign { k } else { -k } * s.sigma;
            prop_assert!(s.value(t).abs() < 1e-6 * a);
        }

        #[test]
        fn scales_with_amplitude(t in 0.0f64..5e-4, a in -10.0f64..10.0) {
            let one = RickerSignal::new(1e-4, 1.0);
            let s = RickerSignal::new(1e-4, a);
            prop_assert!((s.value(t) - a * one.value(t)).abs() <= 1e-15 * a.abs());
        }
    }
}
