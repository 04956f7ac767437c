/// Cumulative root-sum-square of every sample up to and including
/// `up_to_step`, for the sender and the receiver group.
///
/// Each group is a list of per-observer time series on a common time axis.
pub fn compute_rt_measures(sender: &[&[f64]], receiver: &[&[f64]], up_to_step: usize) -> (f64, f64) {
    let rss = |group: &[&[f64]]| -> f64 {
        group
            .iter()
            .map(|s| s.iter().take(up_to_step + 1).map(|p| p * p).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    };
    (rss(sender), rss(receiver))
}

/// Running `(P_ref, P_tra)` after every step.
pub fn cumulative_rt_measures(sender: &[&[f64]], receiver: &[&[f64]]) -> Vec<(f64, f64)> {
    let n = sender.iter().chain(receiver).map(|s| s.len()).max().unwrap_or(0);
    let mut acc = RtAccumulator::default();
    (0..n)
        .map(|j| {
            acc.push(
                sender.iter().filter_map(|s| s.get(j).copied()),
                receiver.iter().filter_map(|s| s.get(j).copied()),
            );
            acc.measures()
        })
        .collect()
}

/// Streaming form of the measures, fed one time step at a time.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RtAccumulator {
    sender_sq: f64,
    receiver_sq: f64,
}

impl RtAccumulator {
    pub fn push(&mut self, sender: impl IntoIterator<Item = f64>, receiver: impl IntoIterator<Item = f64>) {
        self.sender_sq += sender.into_iter().map(|p| p * p).sum::<f64>();
        self.receiver_sq += receiver.into_iter().map(|p| p * p).sum::<f64>();
    }

    pub fn measures(&self) -> (f64, f64) {
        (self.sender_sq.sqrt(), self.receiver_sq.sqrt())
    }
}

/// `P(b) - P(a)` for a cumulative series sampled at `times`, taking the
/// last sample at or before each bound.
pub fn window_increment(times: &[f64], cumulative: &[f64], window: (f64, f64)) -> f64 {
    let at = |t: f64| -> f64 {
        let k = times.partition_point(|&s| s <= t);
        if k == 0 {
            0.0
        } else {
            cumulative[k - 1]
        }
    };
    at(window.1) - at(window.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trivial_cases() {
        let z = [0.0; 5];
        assert_eq!(compute_rt_measures(&[&z], &[&z], 4), (0.0, 0.0));
        assert_eq!(compute_rt_measures(&[&[3.0]], &[&[-4.0]], 0), (3.0, 4.0));
    }

    #[test]
    fn window_increment_uses_last_sample() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let p = [0.0, 1.0, 3.0, 6.0];
        assert_eq!(window_increment(&t, &p, (0.5, 2.5)), 3.0);
        assert_eq!(window_increment(&t, &p, (-1.0, 10.0)), 6.0);
    }

    proptest! {
        #[test]
        fn monotone_and_consistent(s in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 20), 1..4),
                                   r in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 20), 1..4)) {
            let sv: Vec<&[f64]> = s.iter().map(|v| v.as_slice()).collect();
            let rv: Vec<&[f64]> = r.iter().map(|v| v.as_slice()).collect();
            let cum = cumulative_rt_measures(&sv, &rv);
            for j in 0..20 {
                let (a, b) = compute_rt_measures(&sv, &rv, j);
                prop_assert!((cum[j].0 - a).abs() <= 1e-9 * a.max(1.0));
                prop_assert!((cum[j].1 - b).abs() <= 1e-9 * b.max(1.0));
                if j > 0 {
                    prop_assert!(cum[j].0 >= cum[j - 1].0 && cum[j].1 >= cum[j - 1].1);
                }
            }
        }
    }
}
