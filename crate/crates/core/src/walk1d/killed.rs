use serde::{Deserialize, Serialize};

use super::{SiteNoise, StepSampler};
use crate::{Error, Result};

/// Distinct survivors of a killed coalescing system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KilledCount {
    #[serde(rename = "K")]
    pub k: f64,
    pub n: u64,
    pub delta: f64,
    #[serde(rename = "U")]
    pub u: usize,
    pub initial: usize,
}

fn check(k: f64, n: u64, delta: f64) -> Result<(i64, i64)> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", "must be positive"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param("K", "must be positive"));
    }
    let half = (k * n as f64 + 1e-9).floor() as i64;
    let steps = (delta * (n * n) as f64 - 1e-9).ceil() as i64;
    Ok((half, steps))
}

/// Number of distinct particles after each step, starting from one walker on
/// every integer of `[-Kn, Kn]` and killing walkers that leave it. Entry 0
/// is the initial count; the last entry is at step `⌈δn²⌉`.
pub fn killed_survivor_trajectory(k: f64, n: u64, delta: f64, step: &StepSampler, seed: u64) -> Result<Vec<usize>> {
    let (half, steps) = check(k, n, delta)?;
    let noise = SiteNoise::new(seed);
    let width = (2 * half + 1) as usize;
    let mut stamp = vec![u32::MAX; width];
    let mut occupied: Vec<i64> = (-half..=half).collect();
    let mut next = Vec::with_capacity(width);
    let mut counts = Vec::with_capacity(steps as usize + 1);
    counts.push(occupied.len());
    for t in 0..steps {
        next.clear();
        for &x in &occupied {
            let y = x + step.step(noise.word(x, t));
            if y.abs() <= half {
                let slot = (y + half) as usize;
                if stamp[slot] != t as u32 {
                    stamp[slot] = t as u32;
                    next.push(y);
                }
            }
        }
        std::mem::swap(&mut occupied, &mut next);
        counts.push(occupied.len());
    }
    Ok(counts)
}

/// Survivors at step `⌈δn²⌉`.
pub fn killed_survivor_count(k: f64, n: u64, delta: f64, step: &StepSampler, seed: u64) -> Result<KilledCount> {
    let counts = killed_survivor_trajectory(k, n, delta, step, seed)?;
    Ok(KilledCount { k, n, delta, u: *counts.last().expect("nonempty"), initial: counts[0] })
}
