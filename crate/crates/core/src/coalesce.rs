//! The ordered coalescing rule.
//!
//! Free paths `γ_1, γ_2, …` are turned into coalescing paths inductively:
//! path `j` follows itself until the first time `τ_j` it meets one of the
//! already-coalesced paths `γ^c_1 … γ^c_{j-1}`, and from then on follows the
//! lowest-labelled one it met, `γ^c_{I_j}`.
//!
//! Labels are 0-based here. The rule is evaluated by a single sweep over a
//! common time grid that visits live paths in label order, so path `j` only
//! ever looks at lower labels and every prefix of the system is the system
//! of that prefix. After a merge the path stops being advanced; its tail is
//! read from its target, so storage stays proportional to the distinct
//! trajectories rather than to `paths × steps`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::geometry::{crosses_shape, Point, SampledPath, Segment, Trajectory, TubeShape, MAX_DIM};
use crate::noise::{unit_f64, NoiseField};
use crate::{Error, Result};

/// Merge time and target of one path. `tau` is `+∞` iff `target` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub path_index: usize,
    pub tau: f64,
    pub target: Option<usize>,
}

impl MergeRecord {
    fn free(j: usize) -> Self {
        Self { path_index: j, tau: f64::INFINITY, target: None }
    }

    pub fn is_merged(&self) -> bool {
        self.target.is_some()
    }
}

/// How meetings are detected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeetMode {
    /// Exact equality of positions at grid times (lattice walks).
    GridEquality,
    /// One-dimensional continuous paths: a meeting happens when the linear
    /// interpolants cross, or otherwise with the Brownian-bridge probability
    /// `exp(-2 d1 d2 / (σ²_rel Δt))` for same-sign gaps `d1, d2`, where
    /// `σ²_rel = 2 · diffusivity`.
    Bridge1d { diffusivity: f64, seed: u64 },
}

/// A coalesced family: for each path its own stretch up to `τ_j` and the
/// merge record pointing at the path it follows afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescingSystem {
    dim: usize,
    branches: Vec<SampledPath>,
    merges: Vec<MergeRecord>,
    killed: Vec<bool>,
}

impl CoalescingSystem {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn merges(&self) -> &[MergeRecord] {
        &self.merges
    }

    /// Path `j` up to its merge time (its whole free path if it never merges).
    pub fn branch(&self, j: usize) -> &SampledPath {
        &self.branches[j]
    }

    /// Whether the free path `j` was killed at the end of its branch.
    pub fn is_killed(&self, j: usize) -> bool {
        self.killed[j]
    }

    /// Label followed by path `j` at time `t`.
    pub fn follower_at(&self, j: usize, t: f64) -> usize {
        let mut cur = j;
        while let Some(next) = self.merges[cur].target {
            if t >= self.merges[cur].tau {
                cur = next;
            } else {
                break;
            }
        }
        cur
    }

    /// View of the coalesced path `γ^c_j`.
    pub fn path(&self, j: usize) -> CoalescedPath<'_> {
        CoalescedPath { system: self, label: j }
    }

    /// Labels whose paths are still distinct at time `t`, i.e. started by `t`
    /// and not merged at or before `t`.
    pub fn distinct_at(&self, t: f64) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.branches[j].start_time() <= t && !(self.merges[j].tau <= t))
    }

    /// `γ^c_j` as an explicit sampled path.
    pub fn coalesced_path(&self, j: usize) -> SampledPath {
        let d = self.dim;
        let mut times = Vec::new();
        let mut pos = Vec::new();
        let mut cur = j;
        let mut after = f64::NEG_INFINITY;
        loop {
            let b = &self.branches[cur];
            for (k, &t) in b.times().iter().enumerate() {
                if t > after {
                    times.push(t);
                    pos.extend_from_slice(b.sample(k));
                }
            }
            match self.merges[cur].target {
                Some(next) => {
                    after = self.merges[cur].tau;
                    cur = next;
                }
                None => break,
            }
        }
        SampledPath::from_parts(d, times, pos)
    }

    /// Keeps only the first `n` paths, which by prefix stability is the
    /// system of the first `n` free paths.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            dim: self.dim,
            branches: self.branches[..n].to_vec(),
            merges: self.merges[..n].to_vec(),
            killed: self.killed[..n].to_vec(),
        }
    }
}

/// Borrowed coalesced path; evaluates by following merge targets.
#[derive(Debug, Clone, Copy)]
pub struct CoalescedPath<'a> {
    system: &'a CoalescingSystem,
    label: usize,
}

impl CoalescedPath<'_> {
    pub fn label(&self) -> usize {
        self.label
    }
}

impl Trajectory for CoalescedPath<'_> {
    fn dim(&self) -> usize {
        self.system.dim
    }

    fn start_time(&self) -> f64 {
        self.system.branches[self.label].start_time()
    }

    fn end_time(&self) -> f64 {
        let root = self.system.follower_at(self.label, f64::INFINITY);
        if self.system.killed[root] {
            self.system.branches[root].last_time()
        } else {
            f64::INFINITY
        }
    }

    fn eval(&self, t: f64) -> Point {
        let mut cur = self.label;
        loop {
            let m = &self.system.merges[cur];
            match m.target {
                Some(next) if t >= m.tau => cur = next,
                _ => return self.system.branches[cur].eval(t),
            }
        }
    }

    fn visit_segments(&self, a: f64, b: f64, visit: &mut dyn FnMut(&Segment) -> bool) -> bool {
        let mut cur = self.label;
        let mut lo = a;
        loop {
            let m = &self.system.merges[cur];
            let branch = &self.system.branches[cur];
            match m.target {
                Some(next) => {
                    let hi = b.min(m.tau);
                    if lo < hi && !branch.visit_segments(lo, hi, visit) {
                        return false;
                    }
                    if b <= m.tau {
                        return true;
                    }
                    lo = lo.max(m.tau);
                    cur = next;
                }
                None => return branch.visit_segments(lo, b, visit),
            }
        }
    }
}

/// Supplies free paths to the sweep on demand.
pub(crate) trait FreeFeed {
    fn dim(&self) -> usize;
    fn count(&self) -> usize;
    /// Grid index of the first sample of path `j`.
    fn start_index(&self, j: usize) -> i64;
    /// Sample `(time, position)` of path `j` at grid index `k`, or `None` if
    /// the path has ended. Called with consecutive `k` for each path.
    fn sample(&mut self, j: usize, k: i64) -> Option<(f64, Point)>;
    /// Whether an ended path was killed rather than running out of horizon.
    fn killed(&self, _j: usize) -> bool {
        false
    }
}

struct ExplicitFeed<'a> {
    paths: &'a [SampledPath],
    starts: Vec<i64>,
}

impl FreeFeed for ExplicitFeed<'_> {
    fn dim(&self) -> usize {
        self.paths[0].dim()
    }

    fn count(&self) -> usize {
        self.paths.len()
    }

    fn start_index(&self, j: usize) -> i64 {
        self.starts[j]
    }

    fn sample(&mut self, j: usize, k: i64) -> Option<(f64, Point)> {
        let p = &self.paths[j];
        let idx = usize::try_from(k - self.starts[j]).ok()?;
        if idx >= p.len() {
            return None;
        }
        let mut x = [0.0; MAX_DIM];
        x[..p.dim()].copy_from_slice(p.sample(idx));
        Some((p.times()[idx], x))
    }
}

/// Grid indices of the path starts; every sample time must be
/// `origin + k·dt` for integer `k`.
fn grid_starts(paths: &[SampledPath]) -> Result<Vec<i64>> {
    let origin = paths[0].start_time();
    let dt = paths
        .iter()
        .filter(|p| p.len() > 1)
        .map(|p| p.times()[1] - p.times()[0])
        .fold(f64::INFINITY, f64::min);
    if !dt.is_finite() {
        // single-sample paths: every distinct start time is its own knot
        let mut ts: Vec<f64> = paths.iter().map(|p| p.start_time()).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        return Ok(paths.iter().map(|p| ts.partition_point(|&t| t < p.start_time()) as i64).collect());
    }
    let index = |t: f64| -> Result<i64> {
        let r = (t - origin) / dt;
        let k = r.round();
        if (r - k).abs() > 1e-6 {
            return Err(Error::GridMismatch(format!("time {t} is off the grid {origin} + k·{dt}")));
        }
        Ok(k as i64)
    };
    let mut starts = Vec::with_capacity(paths.len());
    for p in paths {
        let s = index(p.start_time())?;
        for (n, &t) in p.times().iter().enumerate() {
            if index(t)? != s + n as i64 {
                return Err(Error::GridMismatch(format!("path sampled at {t} skips grid points")));
            }
        }
        starts.push(s);
    }
    Ok(starts)
}

/// Apply the coalescing rule to ordered free paths.
pub fn coalesce(free_paths: &[SampledPath], mode: MeetMode) -> Result<CoalescingSystem> {
    let Some(first) = free_paths.first() else {
        return Ok(CoalescingSystem { dim: 1, branches: Vec::new(), merges: Vec::new(), killed: Vec::new() });
    };
    let dim = first.dim();
    if let Some(p) = free_paths.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
    }
    if matches!(mode, MeetMode::Bridge1d { .. }) && dim != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: dim });
    }
    if let MeetMode::Bridge1d { diffusivity, .. } = mode {
        if !(diffusivity > 0.0) {
            return Err(Error::param("diffusivity", "must be positive"));
        }
    }
    let starts = grid_starts(free_paths)?;
    let mut feed = ExplicitFeed { paths: free_paths, starts };
    Ok(sweep(&mut feed, mode))
}

/// Branch under construction.
struct Builder {
    times: Vec<f64>,
    pos: Vec<f64>,
}

impl Builder {
    fn push(&mut self, t: f64, x: &Point, dim: usize) {
        if let Some(&last) = self.times.last() {
            if t <= last {
                // merge landed on the previous knot
                let n = self.times.len() - 1;
                self.pos[n * dim..(n + 1) * dim].copy_from_slice(&x[..dim]);
                return;
            }
        }
        self.times.push(t);
        self.pos.extend_from_slice(&x[..dim]);
    }

    fn last(&self, dim: usize) -> (f64, Point) {
        let n = self.times.len() - 1;
        let mut x = [0.0; MAX_DIM];
        x[..dim].copy_from_slice(&self.pos[n * dim..(n + 1) * dim]);
        (self.times[n], x)
    }
}

/// A live path's piece over the current step, ending at `(t1, x1)` (earlier
/// than the step end if the path merged during it).
#[derive(Clone, Copy)]
struct StepPiece {
    label: usize,
    t0: f64,
    x0: f64,
    t1: f64,
    x1: f64,
}

impl StepPiece {
    fn at(&self, t: f64) -> f64 {
        if self.t1 <= self.t0 {
            return self.x1;
        }
        self.x0 + (self.x1 - self.x0) * ((t - self.t0) / (self.t1 - self.t0))
    }
}

fn key(x: &Point, dim: usize) -> [u64; MAX_DIM] {
    let mut k = [0u64; MAX_DIM];
    for i in 0..dim {
        // +0.0 and -0.0 are the same site
        k[i] = (x[i] + 0.0).to_bits();
    }
    k
}

/// Monotone map of floats onto integers.
fn order_key(x: f64) -> i64 {
    let b = (x + 0.0).to_bits() as i64;
    b ^ ((((b >> 63) as u64) >> 1) as i64)
}

const BRIDGE_STREAM: u64 = 0xB41D_6E;

pub(crate) fn sweep(feed: &mut dyn FreeFeed, mode: MeetMode) -> CoalescingSystem {
    let n = feed.count();
    let dim = feed.dim();
    let mut builders: Vec<Builder> = (0..n).map(|_| Builder { times: Vec::new(), pos: Vec::new() }).collect();
    let mut merges: Vec<MergeRecord> = (0..n).map(MergeRecord::free).collect();
    if n == 0 {
        return CoalescingSystem { dim, branches: Vec::new(), merges, killed: Vec::new() };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| (feed.start_index(j), j));
    let mut next_start = 0;
    let coins = match mode {
        MeetMode::Bridge1d { seed, .. } => Some(NoiseField::new(seed, BRIDGE_STREAM)),
        MeetMode::GridEquality => None,
    };
    let rel_var = match mode {
        MeetMode::Bridge1d { diffusivity, .. } => 2.0 * diffusivity,
        MeetMode::GridEquality => 0.0,
    };

    // live paths in label order
    let mut live: Vec<usize> = Vec::new();
    let mut pieces: Vec<StepPiece> = Vec::new();
    let mut by_position: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    let mut sites: HashMap<[u64; MAX_DIM], usize> = HashMap::new();
    let mut k = feed.start_index(order[0]);

    while next_start < n || !live.is_empty() {
        // advance live paths from k-1 to k
        if !live.is_empty() {
            pieces.clear();
            by_position.clear();
            let mut max_move: f64 = 0.0;
            let mut survivors = Vec::with_capacity(live.len());
            for &j in &live {
                let Some((t, x)) = feed.sample(j, k) else {
                    continue; // ended: no further meetings
                };
                let (tp, xp) = builders[j].last(dim);
                let mut merged = None;
                if let Some(coins) = &coins {
                    // gaps wider than this admit neither a crossing nor a
                    // representable bridge probability
                    let reach = (x[0] - xp[0]).abs() + max_move + 40.0 * (rel_var * (t - tp)).sqrt();
                    let near = by_position
                        .range((order_key(xp[0] - reach), 0)..=(order_key(xp[0] + reach), usize::MAX))
                        .map(|(_, &idx)| &pieces[idx]);
                    merged = bridge_meeting(j, tp, xp[0], t, x[0], near, &merges, coins, rel_var);
                }
                match merged {
                    Some((tau, target, at)) => {
                        let mut p = [0.0; MAX_DIM];
                        p[0] = at;
                        builders[j].push(tau, &p, dim);
                        let tau = builders[j].last(dim).0;
                        merges[j] = MergeRecord { path_index: j, tau, target: Some(target) };
                        pieces.push(StepPiece { label: j, t0: tp, x0: xp[0], t1: tau, x1: at });
                        by_position.insert((order_key(xp[0]), j), pieces.len() - 1);
                        max_move = max_move.max((at - xp[0]).abs());
                    }
                    None => {
                        builders[j].push(t, &x, dim);
                        pieces.push(StepPiece { label: j, t0: tp, x0: xp[0], t1: t, x1: x[0] });
                        by_position.insert((order_key(xp[0]), j), pieces.len() - 1);
                        max_move = max_move.max((x[0] - xp[0]).abs());
                        survivors.push(j);
                    }
                }
            }
            live = survivors;
        }

        // paths starting at k
        let mut added = false;
        while next_start < n && feed.start_index(order[next_start]) == k {
            let j = order[next_start];
            next_start += 1;
            if let Some((t, x)) = feed.sample(j, k) {
                builders[j].push(t, &x, dim);
                live.push(j);
                added = true;
            }
        }
        if added {
            live.sort_unstable();
        }

        // exact coincidence at time k
        sites.clear();
        let mut kept = Vec::with_capacity(live.len());
        for &j in &live {
            let (t, x) = builders[j].last(dim);
            match sites.get(&key(&x, dim)) {
                Some(&i) => merges[j] = MergeRecord { path_index: j, tau: t, target: Some(i) },
                None => {
                    sites.insert(key(&x, dim), j);
                    kept.push(j);
                }
            }
        }
        live = kept;

        if live.is_empty() && next_start < n {
            k = feed.start_index(order[next_start]);
        } else {
            k += 1;
        }
    }

    let killed = (0..n).map(|j| !merges[j].is_merged() && feed.killed(j)).collect();
    let branches = builders.into_iter().map(|b| SampledPath::from_parts(dim, b.times, b.pos)).collect();
    CoalescingSystem { dim, branches, merges, killed }
}

/// Earliest meeting of path `j` over the step `(tp, xp) -> (t, x)` with the
/// lower-labelled pieces already advanced this step.
#[allow(clippy::too_many_arguments)]
fn bridge_meeting<'p>(
    j: usize,
    tp: f64,
    xp: f64,
    t: f64,
    x: f64,
    pieces: impl Iterator<Item = &'p StepPiece>,
    merges: &[MergeRecord],
    coins: &NoiseField,
    rel_var: f64,
) -> Option<(f64, usize, f64)> {
    let own = StepPiece { label: j, t0: tp, x0: xp, t1: t, x1: x };
    let mut best: Option<(f64, usize, f64)> = None;
    for p in pieces {
        let end = p.t1;
        if end <= tp {
            continue;
        }
        let d1 = xp - p.x0;
        let d2 = own.at(end) - p.x1;
        let meet = if d1 * d2 <= 0.0 {
            let s = if d1 == d2 { 0.0 } else { d1 / (d1 - d2) };
            let tau = tp + s * (end - tp);
            Some((tau, p.at(tau)))
        } else {
            let expo = 2.0 * d1 * d2 / (rel_var * (end - tp));
            let u = unit_f64(coins.word3(j as u64, p.label as u64, t.to_bits() as i64));
            (expo < 745.0 && u < (-expo).exp()).then_some((end, p.x1))
        };
        if let Some((tau, at)) = meet {
            // a path that merged exactly at tau is its target there
            let mut target = p.label;
            while let Some(next) = merges[target].target {
                if merges[target].tau <= tau {
                    target = next;
                } else {
                    break;
                }
            }
            let better = match best {
                None => true,
                Some((bt, bi, _)) => tau < bt || (tau == bt && target < bi),
            };
            if better {
                best = Some((tau, target, at));
            }
        }
    }
    best
}

/// Entry `k` is true iff some coalesced path crosses `tubes[k]`.
pub fn crossing_set<T: TubeShape>(system: &CoalescingSystem, tubes: &[T], tol: f64) -> Vec<bool> {
    crossing_set_prefix(system, system.len(), tubes, tol)
}

/// Crossing set of the first `n` coalesced paths.
///
/// A path that merged at or before a tube's start time coincides there with
/// its target, so only paths distinct at `t0` are tested.
pub fn crossing_set_prefix<T: TubeShape>(system: &CoalescingSystem, n: usize, tubes: &[T], tol: f64) -> Vec<bool> {
    crossing_set_prefix_by(system, n, tubes, tol, |p, t| crosses_shape(p, t, tol))
}

/// [`crossing_set_prefix`] with a custom per-path crossing test.
pub(crate) fn crossing_set_prefix_by<T, P>(system: &CoalescingSystem, n: usize, tubes: &[T], tol: f64, crosses: P) -> Vec<bool>
where
    T: TubeShape,
    P: Fn(&CoalescedPath<'_>, &T) -> bool,
{
    let n = n.min(system.len());
    tubes
        .iter()
        .map(|tube| {
            let t0 = tube.start_time();
            (0..n).any(|j| {
                !(system.merges[j].tau <= t0)
                    && system.branches[j].start_time() <= t0 + tol
                    && crosses(&system.path(j), tube)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{crosses, PolyTube};

    fn p1(start: f64, xs: &[f64]) -> SampledPath {
        let times = (0..xs.len()).map(|k| start + k as f64).collect();
        SampledPath::from_1d(times, xs.to_vec()).unwrap()
    }

    #[test]
    fn identical_paths_merge_at_start() {
        let a = p1(0.0, &[0.0, 1.0, 0.0]);
        let sys = coalesce(&[a.clone(), a.clone()], MeetMode::GridEquality).unwrap();
        assert_eq!(sys.merges()[1], MergeRecord { path_index: 1, tau: 0.0, target: Some(0) });
        assert_eq!(sys.coalesced_path(1), a);
        assert_eq!(sys.coalesced_path(0), a);
    }

    #[test]
    fn disjoint_paths_do_not_merge() {
        let a = p1(0.0, &[0.0, 1.0, 0.0]);
        let b = p1(0.0, &[5.0, 6.0, 5.0]);
        let sys = coalesce(&[a.clone(), b.clone()], MeetMode::GridEquality).unwrap();
        assert!(sys.merges().iter().all(|m| m.tau == f64::INFINITY && m.target.is_none()));
        assert_eq!(sys.coalesced_path(1), b);
    }

    #[test]
    fn lattice_crossing_without_equality_is_not_a_meeting() {
        let a = p1(0.0, &[0.0, 1.0, 2.0]);
        let b = p1(0.0, &[1.0, 0.0, -1.0]);
        let sys = coalesce(&[a, b], MeetMode::GridEquality).unwrap();
        assert!(!sys.merges()[1].is_merged());
    }

    #[test]
    fn merge_follows_lowest_label_and_absorbs() {
        let a = p1(0.0, &[0.0, 0.0, 0.0, 0.0]);
        let b = p1(0.0, &[2.0, 1.0, 0.0, 9.0]);
        let c = p1(0.0, &[4.0, 1.0, 7.0, 7.0]);
        let sys = coalesce(&[a.clone(), b, c], MeetMode::GridEquality).unwrap();
        assert_eq!(sys.merges()[1].tau, 2.0);
        assert_eq!(sys.merges()[1].target, Some(0));
        // c meets b at time 1 (b not yet merged), then follows b into a
        assert_eq!(sys.merges()[2].tau, 1.0);
        assert_eq!(sys.merges()[2].target, Some(1));
        let c_co = sys.coalesced_path(2);
        assert_eq!(c_co.times(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(c_co.positions(), &[4.0, 1.0, 0.0, 0.0]);
        assert_eq!(sys.path(2).eval(2.5)[0], 0.0);
    }

    #[test]
    fn late_starter_joins_a_lower_label_already_present() {
        let a = p1(2.0, &[5.0, 5.0]);
        let b = p1(0.0, &[3.0, 4.0, 5.0, 6.0]);
        let sys = coalesce(&[a, b], MeetMode::GridEquality).unwrap();
        assert_eq!(sys.merges()[1], MergeRecord { path_index: 1, tau: 2.0, target: Some(0) });
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let a = p1(0.0, &[0.0, 1.0]);
        let b = SampledPath::from_1d(vec![0.5, 1.5], vec![0.0, 1.0]).unwrap();
        assert!(matches!(coalesce(&[a.clone(), b], MeetMode::GridEquality), Err(Error::GridMismatch(_))));
        let c = SampledPath::from_1d(vec![0.0, 2.0], vec![0.0, 1.0]).unwrap();
        assert!(coalesce(&[a, c], MeetMode::GridEquality).is_err());
    }

    #[test]
    fn bridge_mode_merges_at_sign_change() {
        let a = p1(0.0, &[0.0, 0.0, 0.0]);
        let b = p1(0.0, &[1.0, -1.0, -1.0]);
        let mode = MeetMode::Bridge1d { diffusivity: 1e-12, seed: 1 };
        let sys = coalesce(&[a, b], mode).unwrap();
        let m = sys.merges()[1];
        assert_eq!(m.target, Some(0));
        assert!((m.tau - 0.5).abs() < 1e-15);
        assert_eq!(sys.path(1).eval(2.0)[0], 0.0);
        assert_eq!(sys.path(1).eval(0.25)[0], 0.5);
    }

    #[test]
    fn bridge_mode_with_huge_diffusivity_merges_at_step_end() {
        let a = p1(0.0, &[0.0, 0.0]);
        let b = p1(0.0, &[1.0, 1.0]);
        let sys = coalesce(&[a, b], MeetMode::Bridge1d { diffusivity: 1e12, seed: 3 }).unwrap();
        assert_eq!(sys.merges()[1].tau, 1.0);
        assert_eq!(sys.coalesced_path(1).positions(), &[1.0, 0.0]);
    }

    #[test]
    fn bridge_mode_needs_one_dimension() {
        let a = SampledPath::new(2, vec![0.0], vec![0.0, 0.0]).unwrap();
        assert!(coalesce(&[a], MeetMode::Bridge1d { diffusivity: 1.0, seed: 0 }).is_err());
    }

    #[test]
    fn crossing_set_basics() {
        let tube = PolyTube::rect(-1.0, 1.0, 0.0, 1.0).unwrap();
        let sys = coalesce(&[SampledPath::constant(0.0, &[0.0])], MeetMode::GridEquality).unwrap();
        assert_eq!(crossing_set(&sys, &[tube.clone()], 1e-9), vec![true]);
        let none: [PolyTube; 0] = [];
        assert!(crossing_set(&sys, &none, 1e-9).is_empty());
        assert!(crosses(&sys.path(0), &tube, 1e-9));
    }
}
