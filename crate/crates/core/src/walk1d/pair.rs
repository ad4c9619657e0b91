use rand::RngCore;

use super::StepSampler;
use crate::noise::{replica_seed, stream_rng};
use crate::{map_replicas, Error, Result};

const PAIR_STREAM: u64 = 21;

/// Meeting times of two independent walks from `x` and `y`, one per sample,
/// observed up to step `t_max` (`None` when they have not met by then).
pub fn pair_meeting_times(
    x: i64,
    y: i64,
    t_max: u64,
    samples: u64,
    step: &StepSampler,
    seed: u64,
) -> Vec<Option<u64>> {
    map_replicas(samples, |r| {
        if x == y {
            return Some(0);
        }
        let mut rng = stream_rng(replica_seed(seed, r), PAIR_STREAM);
        let (mut a, mut b) = (x, y);
        for t in 1..=t_max {
            a += step.step(rng.next_u64());
            b += step.step(rng.next_u64());
            if a == b {
                return Some(t);
            }
        }
        None
    })
}

/// Empirical `P(τ > t)` for each `t` in `t_values`.
pub fn pair_meeting_tail(
    x: i64,
    y: i64,
    t_values: &[u64],
    samples: u64,
    step: &StepSampler,
    seed: u64,
) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let t_max = t_values.iter().copied().max().unwrap_or(0);
    let taus = pair_meeting_times(x, y, t_max, samples, step, seed);
    Ok(t_values
        .iter()
        .map(|&t| taus.iter().filter(|tau| tau.map_or(true, |s| s > t)).count() as f64 / samples as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk1d::StepDistribution;

    /// `P(τ > t)` for the difference of two independent walks, by dynamic
    /// programming on the difference chain absorbed at 0.
    fn dp_tail(gap: i64, t: usize, step: &StepSampler) -> f64 {
        let mut diff: Vec<(i64, f64)> = Vec::new();
        for (&u, &p) in step.values().iter().zip(step.probs()) {
            for (&v, &q) in step.values().iter().zip(step.probs()) {
                diff.push((u - v, p * q));
            }
        }
        let reach = gap.abs() + 2 * step.max_jump() * t as i64 + 1;
        let off = reach;
        let mut mass = vec![0.0; (2 * reach + 1) as usize];
        mass[(gap + off) as usize] = 1.0;
        for _ in 0..t {
            let mut next = vec![0.0; mass.len()];
            for (i, &m) in mass.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                for &(d, p) in &diff {
                    let j = i as i64 + d;
                    if j != off {
                        next[j as usize] += m * p;
                    }
                }
            }
            mass = next;
        }
        mass.iter().sum()
    }

    #[test]
    fn equal_starts_have_zero_tail() {
        let step = StepDistribution::Lazy.sampler().unwrap();
        assert_eq!(pair_meeting_tail(3, 3, &[1, 10], 100, &step, 0).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn dp_oracle_small_case() {
        let step = StepDistribution::Lazy.sampler().unwrap();
        assert!((dp_tail(1, 4, &step) - 0.4921875).abs() < 1e-15);
        assert!((dp_tail(1, 1, &step) - (1.0 - 0.25)).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_matches_dp_at_small_times() {
        let step = StepDistribution::Lazy.sampler().unwrap();
        let samples = 100_000;
        let ts = [1, 2, 4, 8];
        let tail = pair_meeting_tail(0, 1, &ts, samples, &step, 77).unwrap();
        for (p, &t) in tail.iter().zip(&ts) {
            let exact = dp_tail(1, t as usize, &step);
            let se = (exact * (1.0 - exact) / samples as f64).sqrt();
            assert!((p - exact).abs() < 3.0 * se, "t={t}: {p} vs {exact}");
        }
    }
}
