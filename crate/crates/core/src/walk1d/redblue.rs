use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{SiteNoise, WalkFeed, WalkSpec};
use crate::coalesce::{sweep, CoalescingSystem, MeetMode};
use crate::geometry::Trajectory;
use crate::{Error, Result};

/// First time a red particle and a blue particle sit on the same site and
/// jump with the same noise variable; from then on they coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossMerge {
    pub red: usize,
    pub blue: usize,
    pub time: f64,
}

/// Blue particles started at `s̄` and red particles started at `s̄′` from every
/// site of `[-K, K]`. Red particles jump with an independent noise field on
/// the time window `[s̄′, (s′+δ)‾)` and with the shared field otherwise.
#[derive(Debug, Clone)]
pub struct RedBlue {
    pub blue: CoalescingSystem,
    pub red: CoalescingSystem,
    /// Decoupling window `[start, end)` in time units.
    pub window: (f64, f64),
    pub cross_merges: Vec<CrossMerge>,
}

/// Two-colour coupling: red particles cannot coalesce with blue ones during
/// the window because they use different noise there.
pub fn red_blue_coupling(
    spec: &WalkSpec,
    s: f64,
    s_prime: f64,
    delta: f64,
    k: f64,
    seed: u64,
) -> Result<RedBlue> {
    let sampler = spec.validate()?;
    if !(s < s_prime) {
        return Err(Error::param("s_prime", "must exceed s"));
    }
    if !(delta >= 0.0) {
        return Err(Error::param("delta", "must be nonnegative"));
    }
    if !(k >= 0.0) {
        return Err(Error::param("K", "must be nonnegative"));
    }
    let h = spec.space_step();
    let (blue_k, red_k) = (spec.ceil_index(s), spec.ceil_index(s_prime));
    let window_end = spec.ceil_index(s_prime + delta);
    if !(spec.horizon > red_k as f64 * spec.time_step()) {
        return Err(Error::param("horizon", "must exceed the red start time"));
    }
    let lo = (-k / h - 1e-9).ceil() as i64;
    let hi = (k / h + 1e-9).floor() as i64;
    let blue_starts: Vec<(i64, i64)> = (lo..=hi).map(|x| (x, blue_k)).collect();
    let red_starts: Vec<(i64, i64)> = (lo..=hi).map(|x| (x, red_k)).collect();

    let blue_noise = SiteNoise::new(seed);
    let red_noise = SiteNoise::with_aux(seed, red_k, window_end);
    let blue = sweep(&mut WalkFeed::new(spec, &sampler, blue_noise, blue_starts), MeetMode::GridEquality);
    let red = sweep(&mut WalkFeed::new(spec, &sampler, red_noise, red_starts), MeetMode::GridEquality);

    let cross_merges = scan_cross_merges(spec, &blue, &red, &red_noise);
    let dt = spec.time_step();
    Ok(RedBlue { blue, red, window: (red_k as f64 * dt, window_end as f64 * dt), cross_merges })
}

/// Site of the distinct (unmerged) path `j` at time index `k`, if alive.
fn site_of(sys: &CoalescingSystem, j: usize, k: i64, spec: &WalkSpec) -> Option<i64> {
    let b = sys.branch(j);
    let k0 = spec.time_index(b.start_time())?;
    let idx = usize::try_from(k - k0).ok()?;
    (idx < b.len()).then(|| spec.site(b.sample(idx)[0]).expect("lattice path"))
}

fn scan_cross_merges(spec: &WalkSpec, blue: &CoalescingSystem, red: &CoalescingSystem, noise: &SiteNoise) -> Vec<CrossMerge> {
    let dt = spec.time_step();
    let last = spec.floor_index(spec.horizon);
    let Some(red_k) = (0..red.len()).map(|j| spec.time_index(red.branch(j).start_time()).expect("lattice")).min()
    else {
        return Vec::new();
    };
    let mut pending: Vec<usize> = (0..red.len()).collect();
    let mut found = Vec::new();
    let mut blue_sites: HashMap<i64, usize> = HashMap::new();
    for k in red_k..=last {
        if pending.is_empty() {
            break;
        }
        let t = k as f64 * dt;
        blue_sites.clear();
        for j in blue.distinct_at(t) {
            if let Some(x) = site_of(blue, j, k, spec) {
                blue_sites.entry(x).or_insert(j);
            }
        }
        // a red path merged into a lower red is represented by that one
        pending.retain(|&r| {
            if red.merges()[r].tau <= t {
                return false;
            }
            match site_of(red, r, k, spec).and_then(|x| blue_sites.get(&x)) {
                Some(&b) if !noise.uses_aux(k) => {
                    found.push(CrossMerge { red: r, blue: b, time: t });
                    false
                }
                _ => true,
            }
        });
    }
    found
}
