use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::coalesce::{sweep, CoalescingSystem, FreeFeed, MeetMode};
use crate::geometry::Point;
use crate::noise::{stream_rng, sub_seed};
use crate::{Error, Result};

const INCREMENT_STREAM: u64 = 11;
const COIN_STREAM: u64 = 12;

struct BmFeed {
    starts: Vec<(f64, i64)>,
    rngs: Vec<Option<ChaCha8Rng>>,
    x: Vec<f64>,
    key: u64,
    dt: f64,
    last_index: i64,
}

impl FreeFeed for BmFeed {
    fn dim(&self) -> usize {
        1
    }

    fn count(&self) -> usize {
        self.starts.len()
    }

    fn start_index(&self, j: usize) -> i64 {
        self.starts[j].1
    }

    fn sample(&mut self, j: usize, k: i64) -> Option<(f64, Point)> {
        if k == self.starts[j].1 {
            self.x[j] = self.starts[j].0;
        } else {
            if k > self.last_index {
                return None;
            }
            let rng = self.rngs[j].get_or_insert_with(|| stream_rng(self.key, j as u64));
            let z: f64 = rng.sample(StandardNormal);
            self.x[j] += self.dt.sqrt() * z;
        }
        Some((k as f64 * self.dt, [self.x[j], 0.0, 0.0]))
    }
}

/// Coalescing standard Brownian motions from space-time starts `[x, t]`,
/// sampled every `dt` up to `horizon`.
///
/// Start times are moved up to the next multiple of `dt`. Meetings between
/// grid times are detected with the bridge rule, after which the merged path
/// shares its target's increments.
pub fn simulate_coalescing_bm(starts: &[[f64; 2]], dt: f64, horizon: f64, seed: u64) -> Result<CoalescingSystem> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", "must be positive"));
    }
    let starts: Vec<(f64, i64)> = starts.iter().map(|&[x, t]| (x, (t / dt - 1e-9).ceil() as i64)).collect();
    let n = starts.len();
    let mut feed = BmFeed {
        starts,
        rngs: (0..n).map(|_| None).collect(),
        x: vec![0.0; n],
        key: sub_seed(seed, INCREMENT_STREAM),
        dt,
        last_index: (horizon / dt + 1e-9).floor() as i64,
    };
    let mode = MeetMode::Bridge1d { diffusivity: 1.0, seed: sub_seed(seed, COIN_STREAM) };
    Ok(sweep(&mut feed, mode))
}
