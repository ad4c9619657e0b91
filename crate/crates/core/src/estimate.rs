//! Monte Carlo crossing probabilities and convergence ladders.
//!
//! Every replica is a deterministic function of `(model, starts, seed, r)`.
//! Ladders drive all of their rungs with the same replica noise wherever the
//! rungs are comparable pathwise (prefixes of one start list, or a chain of
//! enlarged tubes), so the almost-sure monotonicity of the flow becomes an
//! exact per-replica check.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalesce::{crossing_set_prefix, crossing_set_prefix_by, CoalescedPath, CoalescingSystem};
use crate::gasket::{build_gasket, GasketGraph, TriTube};
use crate::geometry::{covers_unit_interval, crosses_shape, PolyTube, Segment, Trajectory, TubeShape, DEFAULT_TOL};
use crate::noise::{mix64, replica_seed, sub_seed, unit_f64, NoiseField};
use crate::stats::{binomial_stderr, proportion_interval};
use crate::walk1d::{simulate_coalescing_bm, simulate_coalescing_walks, StepDistribution, WalkSpec};
use crate::{map_replicas, Error, Result};

/// Normal quantile used for reported intervals.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A tube of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum Tube {
    Box(PolyTube),
    Tri(TriTube),
}

impl From<PolyTube> for Tube {
    fn from(t: PolyTube) -> Self {
        Tube::Box(t)
    }
}

impl From<TriTube> for Tube {
    fn from(t: TriTube) -> Self {
        Tube::Tri(t)
    }
}

impl Tube {
    pub fn enlarge(&self, delta: f64) -> Result<Tube> {
        match self {
            Tube::Box(t) => Ok(Tube::Box(t.enlarge(delta)?)),
            Tube::Tri(_) => Err(Error::InvalidTube("enlargement is defined for box tubes".into())),
        }
    }
}

impl TubeShape for Tube {
    fn spatial_dim(&self) -> usize {
        match self {
            Tube::Box(t) => t.spatial_dim(),
            Tube::Tri(t) => t.spatial_dim(),
        }
    }

    fn start_time(&self) -> f64 {
        match self {
            Tube::Box(t) => t.start_time(),
            Tube::Tri(t) => t.start_time(),
        }
    }

    fn end_time(&self) -> f64 {
        match self {
            Tube::Box(t) => TubeShape::end_time(t),
            Tube::Tri(t) => TubeShape::end_time(t),
        }
    }

    fn in_lower_face(&self, x: &[f64], tol: f64) -> bool {
        match self {
            Tube::Box(t) => t.in_lower_face(x, tol),
            Tube::Tri(t) => t.in_lower_face(x, tol),
        }
    }

    fn in_upper_face(&self, x: &[f64], tol: f64) -> bool {
        match self {
            Tube::Box(t) => t.in_upper_face(x, tol),
            Tube::Tri(t) => t.in_upper_face(x, tol),
        }
    }

    fn clip_segment(&self, seg: &Segment, tol: f64, out: &mut Vec<(f64, f64)>) {
        match self {
            Tube::Box(t) => t.clip_segment(seg, tol, out),
            Tube::Tri(t) => t.clip_segment(seg, tol, out),
        }
    }
}

/// A coalescing model ready to simulate.
#[derive(Debug, Clone)]
pub enum Model {
    /// Rescaled lattice walks.
    Walk1d(WalkSpec),
    /// Coalescing Brownian motions sampled every `dt`; `spacing` is the gap
    /// between generated starting points on tube faces.
    Bm1d { dt: f64, horizon: f64, spacing: f64 },
    /// Walks on the level-`n` gasket.
    Gasket { graph: Arc<GasketGraph>, horizon: f64 },
}

impl Model {
    pub fn walk(eta: f64, step: StepDistribution, horizon: f64) -> Result<Self> {
        Ok(Model::Walk1d(WalkSpec::new(eta, step, horizon)?))
    }

    /// Brownian model with face starts `sqrt(dt)` apart unless given.
    pub fn bm(dt: f64, horizon: f64, spacing: Option<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::param("dt", "must be positive"));
        }
        let spacing = spacing.unwrap_or(dt.sqrt());
        if !(spacing > 0.0) {
            return Err(Error::param("spacing", "must be positive"));
        }
        Ok(Model::Bm1d { dt, horizon, spacing })
    }

    pub fn gasket(n: u32, m: u32, horizon: f64) -> Result<Self> {
        Ok(Model::Gasket { graph: Arc::new(build_gasket(n, m)?), horizon })
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::Gasket { .. } => 2,
            _ => 1,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Model::Walk1d(s) => format!("walk1d(eta={}, sigma2={}, horizon={})", s.eta, s.sigma2, s.horizon),
            Model::Bm1d { dt, horizon, spacing } => format!("bm1d(dt={dt}, horizon={horizon}, spacing={spacing})"),
            Model::Gasket { graph, horizon } => {
                format!("gasket(n={}, m={}, horizon={horizon})", graph.level(), graph.extent())
            }
        }
    }

    /// Runs the model from space-time starts (`dim` coordinates then time).
    /// Crossing indicators of the first `n` paths of a replica simulated
    /// with `seed`. Brownian paths also have to keep the excursions of their
    /// bridges between samples inside the tube.
    pub fn crossings(&self, sys: &CoalescingSystem, n: usize, tubes: &[Tube], seed: u64) -> Vec<bool> {
        match self {
            Model::Bm1d { .. } => {
                let noise = NoiseField::new(seed, ENVELOPE_STREAM);
                crossing_set_prefix_by(sys, n, tubes, DEFAULT_TOL, |p, t| {
                    crosses_shape(p, t, DEFAULT_TOL) && bridge_envelope_inside(p, t, &noise)
                })
            }
            _ => crossing_set_prefix(sys, n, tubes, DEFAULT_TOL),
        }
    }

    pub fn simulate(&self, starts: &[Vec<f64>], seed: u64) -> Result<CoalescingSystem> {
        let d = self.dim();
        if let Some(s) = starts.iter().find(|s| s.len() != d + 1) {
            return Err(Error::DimensionMismatch { expected: d + 1, got: s.len() });
        }
        match self {
            Model::Walk1d(spec) => {
                let st: Vec<[f64; 2]> = starts.iter().map(|s| [s[0], s[1]]).collect();
                simulate_coalescing_walks(spec, &st, seed)
            }
            Model::Bm1d { dt, horizon, .. } => {
                let st: Vec<[f64; 2]> = starts.iter().map(|s| [s[0], s[1]]).collect();
                simulate_coalescing_bm(&st, *dt, *horizon, seed)
            }
            Model::Gasket { graph, horizon } => {
                let st: Vec<[f64; 3]> = starts.iter().map(|s| [s[0], s[1], s[2]]).collect();
                crate::gasket::simulate_coalescing_gasket(graph, &st, *horizon, seed)
            }
        }
    }

    /// Starting points that cover the lower face of every tube at (or just
    /// before) its start time, for this model's resolution.
    ///
    /// For the lattice models this is every site from which a path can be on
    /// the face at `t0`, so a lattice path crossing the tube is always one of
    /// the simulated paths.
    pub fn face_starts(&self, tubes: &[Tube]) -> Result<Vec<Vec<f64>>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for tube in tubes {
            if tube.spatial_dim() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), got: tube.spatial_dim() });
            }
            let t0 = tube.start_time();
            match (self, tube) {
                (Model::Walk1d(spec), Tube::Box(b)) => {
                    let h = spec.space_step();
                    let reach = spec.validate()?.max_jump() as f64 * h;
                    let t = spec.floor_index(t0) as f64 * spec.time_step();
                    for face in b.lower_face() {
                        let lo = ((face.lo()[0] - reach) / h - 1e-9).ceil() as i64;
                        let hi = ((face.hi()[0] + reach) / h + 1e-9).floor() as i64;
                        out.extend((lo..=hi).map(|s| vec![s as f64 * h, t]));
                    }
                }
                (Model::Bm1d { dt, spacing, .. }, Tube::Box(b)) => {
                    let t = (t0 / dt + 1e-9).floor() * dt;
                    for face in b.lower_face() {
                        let (a, c) = (face.lo()[0], face.hi()[0]);
                        let k = ((c - a) / spacing).ceil().max(1.0) as usize;
                        out.extend(dense_points(a, c, k + 1).into_iter().map(|x| vec![x, t]));
                    }
                }
                (Model::Gasket { graph, .. }, Tube::Tri(tri)) => {
                    let dt = graph.time_step();
                    let t = (t0 / dt + 1e-9).floor() * dt;
                    let on_face = |v: usize| tri.in_lower_face(&graph.position(v), DEFAULT_TOL);
                    for v in 0..graph.len() {
                        if on_face(v) || graph.neighbors(v).iter().any(|&w| on_face(w as usize)) {
                            let x = graph.position(v);
                            out.push(vec![x[0], x[1], t]);
                        }
                    }
                }
                _ => return Err(Error::InvalidTube("tube family does not match the model".into())),
            }
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|s| seen.insert(s.iter().map(|v| v.to_bits()).collect::<Vec<_>>()));
        Ok(out)
    }
}

const ENVELOPE_STREAM: u64 = 13;

/// Range `[min, max]` of a unit-diffusivity Brownian bridge from `x0` to
/// `x1` over time `span`. The draw is keyed by the segment itself, so paths
/// sharing a segment after coalescing see the same bridge.
fn bridge_range(seg: &Segment, noise: &NoiseField) -> (f64, f64) {
    let (x0, x1) = (seg.x0[0], seg.x1[0]);
    let span = seg.t1 - seg.t0;
    let w = noise.word3(x0.to_bits(), x1.to_bits() ^ span.to_bits(), seg.t0.to_bits() as i64);
    let (u_max, u_min) = (1.0 - unit_f64(w), 1.0 - unit_f64(mix64(w)));
    let d2 = (x1 - x0) * (x1 - x0);
    let hi = 0.5 * (x0 + x1 + (d2 - 2.0 * span * u_max.ln()).sqrt());
    let lo = 0.5 * (x0 + x1 - (d2 - 2.0 * span * u_min.ln()).sqrt());
    (lo, hi)
}

/// Whether every bridge segment of `path` on `[t0, t1]` stays in the box
/// tube. The range of a segment is tested against the tube's slices over the
/// segment's whole time span. The two extremes are drawn independently,
/// which ignores their (exponentially small) correlation.
fn bridge_envelope_inside(path: &CoalescedPath<'_>, tube: &Tube, noise: &NoiseField) -> bool {
    let Tube::Box(b) = tube else { return true };
    if b.spatial_dim() != 1 {
        return true;
    }
    path.visit_segments(b.start_time(), b.end_time(), &mut |seg| {
        let span = seg.t1 - seg.t0;
        if !(span > 0.0) {
            return true;
        }
        let (lo, hi) = bridge_range(seg, noise);
        let mut cover: Vec<(f64, f64)> = b
            .pieces()
            .iter()
            .filter(|p| p.lo()[0] - DEFAULT_TOL <= lo && hi <= p.hi()[0] + DEFAULT_TOL)
            .map(|p| ((p.lo()[1] - seg.t0) / span, (p.hi()[1] - seg.t0) / span))
            .filter(|(a, c)| *c >= 0.0 && *a <= 1.0)
            .collect();
        covers_unit_interval(&mut cover)
    })
}

/// `n` points of `[a, b]` in van der Corput order: endpoints first, then
/// successive midpoints, so every prefix is spread over the interval.
pub fn dense_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(a);
    if n == 1 {
        return out;
    }
    out.push(b);
    let mut i = 1u64;
    while out.len() < n {
        // radical inverse in base 2
        let mut x = 0.0;
        let mut f = 0.5;
        let mut k = i;
        while k > 0 {
            if k & 1 == 1 {
                x += f;
            }
            k >>= 1;
            f *= 0.5;
        }
        out.push(a + x * (b - a));
        i += 1;
    }
    out
}

/// Monte Carlo estimate of the probability that every listed tube is
/// crossed by some path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingEstimate {
    pub tubes: Vec<String>,
    pub p_hat: f64,
    pub stderr: f64,
    pub ci: (f64, f64),
    pub successes: u64,
    pub samples: u64,
    pub seed: u64,
    pub model: String,
}

impl CrossingEstimate {
    pub fn from_counts(tubes: Vec<String>, successes: u64, samples: u64, seed: u64, model: String) -> Self {
        let p_hat = if samples == 0 { 0.0 } else { successes as f64 / samples as f64 };
        Self {
            tubes,
            p_hat,
            stderr: binomial_stderr(p_hat, samples),
            ci: proportion_interval(successes, samples, Z95),
            successes,
            samples,
            seed,
            model,
        }
    }

    /// `sqrt(se₁² + se₂²)`.
    pub fn joint_stderr(&self, other: &CrossingEstimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

/// Per-replica crossing indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaRecord {
    pub replica: u64,
    pub seed: u64,
    /// One row per rung, one entry per tube.
    pub crossed: Vec<Vec<bool>>,
}

/// Estimates for a ladder of rungs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub parameter: String,
    pub ladder: Vec<f64>,
    pub estimates: Vec<CrossingEstimate>,
    /// Whether the rungs satisfied the expected per-replica ordering.
    pub monotone_flag: bool,
    pub violations: u64,
    /// `ci_overlap[i][j]`: the 95% intervals of rungs `i` and `j` overlap.
    pub ci_overlap: Vec<Vec<bool>>,
    pub reference: Option<CrossingEstimate>,
}

impl ConvergenceReport {
    fn new(
        parameter: &str,
        ladder: Vec<f64>,
        estimates: Vec<CrossingEstimate>,
        violations: u64,
        reference: Option<CrossingEstimate>,
    ) -> Self {
        let ci_overlap = estimates
            .iter()
            .map(|a| estimates.iter().map(|b| a.ci.0 <= b.ci.1 && b.ci.0 <= a.ci.1).collect())
            .collect();
        Self { parameter: parameter.into(), ladder, estimates, monotone_flag: violations == 0, violations, ci_overlap, reference }
    }

    /// `|p̂ - p̂_ref|` per rung.
    pub fn gaps(&self) -> Vec<f64> {
        match &self.reference {
            Some(r) => self.estimates.iter().map(|e| (e.p_hat - r.p_hat).abs()).collect(),
            None => Vec::new(),
        }
    }
}

fn tube_names(tubes: &[Tube]) -> Vec<String> {
    (0..tubes.len()).map(|i| format!("T{i}")).collect()
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    Ok(())
}

fn starts_or_faces(model: &Model, starts: Option<&[Vec<f64>]>, tubes: &[Tube]) -> Result<Vec<Vec<f64>>> {
    match starts {
        Some(s) => Ok(s.to_vec()),
        None => model.face_starts(tubes),
    }
}

/// Runs `samples` replicas, each evaluating `rungs` on one simulated system.
fn run<F>(model: &Model, starts: &[Vec<f64>], samples: u64, seed: u64, rungs: F) -> Result<Vec<ReplicaRecord>>
where
    F: Fn(&CoalescingSystem, u64) -> Vec<Vec<bool>> + Sync + Send,
{
    check_samples(samples)?;
    map_replicas(samples, |r| {
        let s = replica_seed(seed, r);
        let sys = model.simulate(starts, s)?;
        Ok(ReplicaRecord { replica: r, seed: s, crossed: rungs(&sys, s) })
    })
    .into_iter()
    .collect()
}

fn joint_counts(records: &[ReplicaRecord], rungs: usize) -> Vec<u64> {
    (0..rungs)
        .map(|i| records.iter().filter(|rec| rec.crossed[i].iter().all(|&c| c)).count() as u64)
        .collect()
}

/// Probability that every tube is crossed, with per-replica records.
pub fn estimate_joint_crossing_raw(
    model: &Model,
    starts: Option<&[Vec<f64>]>,
    tubes: &[Tube],
    samples: u64,
    seed: u64,
) -> Result<(CrossingEstimate, Vec<ReplicaRecord>)> {
    let starts = starts_or_faces(model, starts, tubes)?;
    let records = run(model, &starts, samples, seed, |sys, s| vec![model.crossings(sys, sys.len(), tubes, s)])?;
    let k = joint_counts(&records, 1)[0];
    Ok((CrossingEstimate::from_counts(tube_names(tubes), k, samples, seed, model.descriptor()), records))
}

/// Probability that every tube is crossed. Without explicit starts the
/// model's face starts are used.
pub fn estimate_joint_crossing(
    model: &Model,
    starts: Option<&[Vec<f64>]>,
    tubes: &[Tube],
    samples: u64,
    seed: u64,
) -> Result<CrossingEstimate> {
    Ok(estimate_joint_crossing_raw(model, starts, tubes, samples, seed)?.0)
}

/// Crossing estimates for the first `n` starts, `n` in `n_values`, all rungs
/// sharing each replica's noise. A violation is a replica and tube for
/// which the indicator drops as `n` grows.
pub fn n_ladder_study_raw(
    model: &Model,
    starts: &[Vec<f64>],
    tubes: &[Tube],
    n_values: &[usize],
    samples: u64,
    seed: u64,
) -> Result<(ConvergenceReport, Vec<ReplicaRecord>)> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("n_values", "must be nonempty and strictly increasing"));
    }
    let top = *n_values.last().expect("nonempty");
    if top > starts.len() {
        return Err(Error::param("n_values", format!("largest rung {top} exceeds the {} starts", starts.len())));
    }
    let records = run(model, &starts[..top], samples, seed, |sys, s| {
        n_values.iter().map(|&n| model.crossings(sys, n, tubes, s)).collect()
    })?;
    let violations = count_drops(&records);
    let estimates = joint_counts(&records, n_values.len())
        .into_iter()
        .map(|k| CrossingEstimate::from_counts(tube_names(tubes), k, samples, seed, model.descriptor()))
        .collect();
    let ladder = n_values.iter().map(|&n| n as f64).collect();
    Ok((ConvergenceReport::new("n", ladder, estimates, violations, None), records))
}

pub fn n_ladder_study(
    model: &Model,
    starts: &[Vec<f64>],
    tubes: &[Tube],
    n_values: &[usize],
    samples: u64,
    seed: u64,
) -> Result<ConvergenceReport> {
    Ok(n_ladder_study_raw(model, starts, tubes, n_values, samples, seed)?.0)
}

/// Number of (replica, rung, tube) entries where an indicator is true at
/// one rung and false at the next.
fn count_drops(records: &[ReplicaRecord]) -> u64 {
    records
        .iter()
        .map(|rec| {
            rec.crossed
                .windows(2)
                .map(|w| w[0].iter().zip(&w[1]).filter(|(&a, &b)| a && !b).count() as u64)
                .sum::<u64>()
        })
        .sum()
}

/// Estimates under each model of a ladder and under a reference model, each
/// with its own face starts and an independent seed stream.
pub fn model_ladder_study(
    parameter: &str,
    ladder: &[f64],
    models: &[Model],
    reference: &Model,
    tubes: &[Tube],
    samples: u64,
    seed: u64,
) -> Result<ConvergenceReport> {
    if ladder.len() != models.len() {
        return Err(Error::param("ladder", "needs one model per rung"));
    }
    let mut estimates = Vec::with_capacity(models.len());
    for (i, m) in models.iter().enumerate() {
        estimates.push(estimate_joint_crossing(m, None, tubes, samples, sub_seed(seed, i as u64))?);
    }
    let r = estimate_joint_crossing(reference, None, tubes, samples, sub_seed(seed, u64::MAX))?;
    Ok(ConvergenceReport::new(parameter, ladder.to_vec(), estimates, 0, Some(r)))
}

/// Simulated time past the last tube end.
const HORIZON_MARGIN: f64 = 0.05;

/// Rescaled walks at decreasing `η` against a discretised Brownian reference.
pub fn eta_ladder_study(
    tubes: &[Tube],
    eta_values: &[f64],
    step: &StepDistribution,
    bm_dt: f64,
    bm_spacing: Option<f64>,
    samples: u64,
    seed: u64,
) -> Result<ConvergenceReport> {
    if eta_values.is_empty() || eta_values.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::param("eta_values", "must be nonempty and strictly decreasing"));
    }
    let horizon = tubes.iter().map(|t| t.end_time()).fold(0.0, f64::max) + HORIZON_MARGIN;
    let models =
        eta_values.iter().map(|&eta| Model::walk(eta, step.clone(), horizon)).collect::<Result<Vec<_>>>()?;
    let reference = Model::bm(bm_dt, horizon, bm_spacing)?;
    model_ladder_study("eta", eta_values, &models, &reference, tubes, samples, seed)
}

/// Gasket walks at increasing levels against a finer reference level.
pub fn gasket_level_study(
    tubes: &[Tube],
    levels: &[u32],
    reference_level: u32,
    extent: u32,
    samples: u64,
    seed: u64,
) -> Result<ConvergenceReport> {
    if levels.is_empty() || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("levels", "must be nonempty and strictly increasing"));
    }
    let horizon = tubes.iter().map(|t| t.end_time()).fold(0.0, f64::max) + HORIZON_MARGIN;
    let models = levels.iter().map(|&n| Model::gasket(n, extent, horizon)).collect::<Result<Vec<_>>>()?;
    let reference = Model::gasket(reference_level, extent, horizon)?;
    let ladder: Vec<f64> = levels.iter().map(|&n| 2f64.powi(-(n as i32))).collect();
    model_ladder_study("eta", &ladder, &models, &reference, tubes, samples, seed)
}

/// Crossing of `T^δ` for each `δ` (decreasing) and of `T` itself, all on the
/// same replicas. The report's reference is `T`; a violation is a replica
/// crossing a thinner tube but not a thicker one.
pub fn enlargement_stability_raw(
    model: &Model,
    starts: Option<&[Vec<f64>]>,
    tube: &Tube,
    deltas: &[f64],
    samples: u64,
    seed: u64,
) -> Result<(ConvergenceReport, Vec<ReplicaRecord>)> {
    if deltas.is_empty() || deltas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::param("deltas", "must be nonempty and strictly decreasing"));
    }
    let mut chain = deltas.iter().map(|&d| tube.enlarge(d)).collect::<Result<Vec<_>>>()?;
    chain.push(tube.clone());
    let starts = starts_or_faces(model, starts, &chain)?;
    let records = run(model, &starts, samples, seed, |sys, s| {
        // one rung per tube, thickest first
        model.crossings(sys, sys.len(), &chain, s).into_iter().map(|c| vec![c]).collect()
    })?;
    // crossing must be nonincreasing along the chain
    let violations: u64 = records
        .iter()
        .map(|rec| rec.crossed.windows(2).filter(|w| !w[0][0] && w[1][0]).count() as u64)
        .sum();
    let counts = joint_counts(&records, chain.len());
    let mk = |i: usize, k: u64| {
        let name = if i < deltas.len() { format!("T^{}", deltas[i]) } else { "T".to_string() };
        CrossingEstimate::from_counts(vec![name], k, samples, seed, model.descriptor())
    };
    let mut estimates: Vec<CrossingEstimate> = counts.iter().enumerate().map(|(i, &k)| mk(i, k)).collect();
    let base = estimates.pop();
    Ok((ConvergenceReport::new("delta", deltas.to_vec(), estimates, violations, base), records))
}

pub fn enlargement_stability(
    model: &Model,
    starts: Option<&[Vec<f64>]>,
    tube: &Tube,
    deltas: &[f64],
    samples: u64,
    seed: u64,
) -> Result<ConvergenceReport> {
    Ok(enlargement_stability_raw(model, starts, tube, deltas, samples, seed)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::crosses_shape;

    fn rect(a: f64, b: f64, s: f64, t: f64) -> Tube {
        Tube::Box(PolyTube::rect(a, b, s, t).unwrap())
    }

    #[test]
    fn dense_points_prefixes_spread() {
        assert_eq!(dense_points(0.0, 1.0, 5), vec![0.0, 1.0, 0.5, 0.25, 0.75]);
        assert!(dense_points(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn huge_tube_is_crossed_almost_surely() {
        let model = Model::walk(0.25, StepDistribution::Lazy, 2.0).unwrap();
        let tubes = [rect(-50.0, 50.0, 0.0, 1.0)];
        let starts = vec![vec![0.0, 0.0]];
        let e = estimate_joint_crossing(&model, Some(&starts), &tubes, 10_000, 1).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert!(e.ci.0 > 0.99);
    }

    #[test]
    fn tube_beyond_the_kill_region_is_never_crossed() {
        let spec = WalkSpec::new(0.25, StepDistribution::Lazy, 2.0).unwrap().with_kill(-1.0, 1.0);
        let model = Model::Walk1d(spec);
        let tubes = [rect(2.0, 3.0, 0.5, 1.0)];
        let starts: Vec<Vec<f64>> = (-2..=2).map(|i| vec![i as f64 * 0.25 / 0.5f64.sqrt(), 0.0]).collect();
        let e = estimate_joint_crossing(&model, Some(&starts), &tubes, 2_000, 1).unwrap();
        assert_eq!(e.p_hat, 0.0);
    }

    #[test]
    fn crossing_set_matches_per_path_oracle() {
        let model = Model::walk(0.25, StepDistribution::Lazy, 3.0).unwrap();
        let h = 0.25 / 0.5f64.sqrt();
        let starts: Vec<Vec<f64>> = (0..5).map(|i| vec![(2 * i) as f64 * h - 4.0 * h, 0.0]).collect();
        let tubes = [rect(-0.5, 0.2, 0.5, 1.0), rect(0.0, 0.8, 1.0, 2.0), rect(-1.0, 1.0, 0.25, 2.5)];
        for seed in 0..200 {
            let sys = model.simulate(&starts, seed).unwrap();
            let fast = crate::coalesce::crossing_set(&sys, &tubes, DEFAULT_TOL);
            let brute: Vec<bool> = tubes
                .iter()
                .map(|t| (0..sys.len()).any(|j| crosses_shape(&sys.coalesced_path(j), t, DEFAULT_TOL)))
                .collect();
            assert_eq!(fast, brute, "seed {seed}");
        }
    }

    #[test]
    fn n_ladder_is_monotone_per_replica() {
        let model = Model::bm(1e-3, 2.0, None).unwrap();
        let starts: Vec<Vec<f64>> = dense_points(-2.0, 2.0, 20).into_iter().map(|x| vec![x, 0.0]).collect();
        let tubes = [rect(0.0, 1.0, 0.5, 1.0), rect(-1.0, 0.0, 0.3, 0.8)];
        let r = n_ladder_study(&model, &starts, &tubes, &[5, 10, 20], 200, 3).unwrap();
        assert!(r.monotone_flag);
        assert!(r.estimates.windows(2).all(|w| w[0].p_hat <= w[1].p_hat));
        let one = n_ladder_study(&model, &starts, &tubes, &[1], 10, 3).unwrap();
        assert_eq!(one.estimates.len(), 1);
        assert!(one.monotone_flag);
    }

    #[test]
    fn enlargement_chain_is_monotone_per_replica() {
        let model = Model::walk(0.125, StepDistribution::Lazy, 2.0).unwrap();
        let tube = rect(0.0, 1.0, 0.0, 1.0);
        let r = enlargement_stability(&model, None, &tube, &[0.3, 0.1, 0.02], 300, 9).unwrap();
        assert!(r.monotone_flag);
        let base = r.reference.as_ref().unwrap().p_hat;
        assert!(r.estimates.iter().all(|e| e.p_hat >= base));
    }

    #[test]
    fn replay_is_bit_identical() {
        let model = Model::walk(0.25, StepDistribution::Lazy, 2.0).unwrap();
        let tubes = [rect(0.0, 1.0, 0.5, 1.0)];
        let a = estimate_joint_crossing_raw(&model, None, &tubes, 500, 42).unwrap();
        let b = estimate_joint_crossing_raw(&model, None, &tubes, 500, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn impossible_tube_gives_zero_on_every_rung() {
        // starts far away and a short horizon: nothing reaches the tube
        let tubes = [rect(50.0, 51.0, 0.0, 0.5)];
        let model = Model::walk(0.25, StepDistribution::Lazy, 1.0).unwrap();
        let starts = vec![vec![0.0, 0.0]];
        let e = estimate_joint_crossing(&model, Some(&starts), &tubes, 100, 0).unwrap();
        assert_eq!(e.p_hat, 0.0);
    }
}
