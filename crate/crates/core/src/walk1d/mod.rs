//! Coalescing systems in one dimension.
//!
//! Lattice walks live on `σ⁻¹η ℤ × η² ℤ` and are driven by a noise field
//! with one variable per space-time site: every walker on site `x` at time
//! index `k` jumps by the step drawn from `ξ(x, k)`. Two walkers on the same
//! site therefore move together forever, and the whole flow is a function
//! of the seed.

mod bm;
mod killed;
mod pair;
mod redblue;
mod step;

pub use bm::simulate_coalescing_bm;
pub use killed::{killed_survivor_count, killed_survivor_trajectory, KilledCount};
pub use pair::{pair_meeting_tail, pair_meeting_times};
pub use redblue::{red_blue_coupling, CrossMerge, RedBlue};
pub use step::{StepDistribution, StepSampler, WalkSpec};

use crate::coalesce::{sweep, CoalescingSystem, FreeFeed, MeetMode};
use crate::geometry::{Point, SampledPath};
use crate::noise::NoiseField;
use crate::{Error, Result};

/// Noise stream of the shared site-time field.
pub const WALK_STREAM: u64 = 1;
pub(crate) const AUX_STREAM: u64 = 2;

/// Site-time noise, optionally replaced by an auxiliary field on a window
/// of time indices `[lo, hi)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SiteNoise {
    main: NoiseField,
    aux: Option<(NoiseField, i64, i64)>,
}

impl SiteNoise {
    pub(crate) fn new(seed: u64) -> Self {
        Self { main: NoiseField::new(seed, WALK_STREAM), aux: None }
    }

    pub(crate) fn with_aux(seed: u64, lo: i64, hi: i64) -> Self {
        Self { main: NoiseField::new(seed, WALK_STREAM), aux: Some((NoiseField::new(seed, AUX_STREAM), lo, hi)) }
    }

    /// Whether the step leaving time index `k` uses the auxiliary field.
    pub(crate) fn uses_aux(&self, k: i64) -> bool {
        matches!(self.aux, Some((_, lo, hi)) if lo <= k && k < hi)
    }

    #[inline]
    pub(crate) fn word(&self, site: i64, k: i64) -> u64 {
        match self.aux {
            Some((f, lo, hi)) if lo <= k && k < hi => f.word(site, k),
            _ => self.main.word(site, k),
        }
    }
}

/// Lazily generated lattice walks, in site units.
pub(crate) struct WalkFeed<'a> {
    sampler: &'a StepSampler,
    noise: SiteNoise,
    starts: Vec<(i64, i64)>,
    site: Vec<i64>,
    dead: Vec<bool>,
    last_index: i64,
    kill: Option<(i64, i64)>,
    h: f64,
    dt: f64,
}

impl<'a> WalkFeed<'a> {
    pub(crate) fn new(
        spec: &WalkSpec,
        sampler: &'a StepSampler,
        noise: SiteNoise,
        starts: Vec<(i64, i64)>,
    ) -> Self {
        let n = starts.len();
        Self {
            sampler,
            noise,
            starts,
            site: vec![0; n],
            dead: vec![false; n],
            last_index: spec.floor_index(spec.horizon),
            kill: spec.kill_sites(),
            h: spec.space_step(),
            dt: spec.time_step(),
        }
    }

    fn outside(&self, s: i64) -> bool {
        matches!(self.kill, Some((lo, hi)) if s < lo || s > hi)
    }
}

impl FreeFeed for WalkFeed<'_> {
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
            self.site[j] = self.starts[j].0;
        } else {
            if self.dead[j] || k > self.last_index {
                return None;
            }
            let s = self.site[j];
            self.site[j] = s + self.sampler.step(self.noise.word(s, k - 1));
        }
        if self.outside(self.site[j]) {
            self.dead[j] = true;
        }
        Some((k as f64 * self.dt, [self.site[j] as f64 * self.h, 0.0, 0.0]))
    }

    fn killed(&self, j: usize) -> bool {
        self.dead[j]
    }
}

/// Lattice sites and time indices of space-time starts `[x, t]`.
pub(crate) fn lattice_starts(spec: &WalkSpec, starts: &[[f64; 2]]) -> Result<Vec<(i64, i64)>> {
    starts
        .iter()
        .map(|&[x, t]| match (spec.site(x), spec.time_index(t)) {
            (Some(s), Some(k)) => Ok((s, k)),
            _ => Err(Error::OffLattice { x, t }),
        })
        .collect()
}

/// Coalescing rescaled walks from space-time starts `[x, t]` on the lattice.
pub fn simulate_coalescing_walks(spec: &WalkSpec, starts: &[[f64; 2]], seed: u64) -> Result<CoalescingSystem> {
    let sampler = spec.validate()?;
    let sites = lattice_starts(spec, starts)?;
    if let Some(&[_, t]) = starts.iter().max_by(|a, b| a[1].total_cmp(&b[1])) {
        if !(spec.horizon > t) {
            return Err(Error::param("horizon", format!("must exceed the latest start time {t}")));
        }
    }
    let mut feed = WalkFeed::new(spec, &sampler, SiteNoise::new(seed), sites);
    Ok(sweep(&mut feed, MeetMode::GridEquality))
}

/// The free walk from `[x, t]` under the same noise field, ignoring killing.
pub fn free_walk(spec: &WalkSpec, start: [f64; 2], seed: u64) -> Result<SampledPath> {
    let sampler = spec.validate()?;
    let (mut s, k0) = lattice_starts(spec, &[start])?[0];
    let noise = SiteNoise::new(seed);
    let last = spec.floor_index(spec.horizon);
    let (h, dt) = (spec.space_step(), spec.time_step());
    let mut times = vec![k0 as f64 * dt];
    let mut xs = vec![s as f64 * h];
    for k in k0..last {
        s += sampler.step(noise.word(s, k));
        times.push((k + 1) as f64 * dt);
        xs.push(s as f64 * h);
    }
    SampledPath::from_1d(times, xs)
}
