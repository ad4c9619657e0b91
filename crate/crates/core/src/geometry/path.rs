use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// A spatial point; only the first `dim` entries are meaningful.
pub type Point = [f64; MAX_DIM];

/// One linear piece `(x0, t0) -> (x1, t1)` of a trajectory, `t0 <= t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub x0: Point,
    pub t1: f64,
    pub x1: Point,
}

impl Segment {
    pub fn at(&self, t: f64, dim: usize) -> Point {
        let mut out = [0.0; MAX_DIM];
        let span = self.t1 - self.t0;
        let s = if span > 0.0 { ((t - self.t0) / span).clamp(0.0, 1.0) } else { 0.0 };
        for i in 0..dim {
            out[i] = self.x0[i] + s * (self.x1[i] - self.x0[i]);
        }
        out
    }
}

/// Something that can be evaluated as a continuous path with a start time.
///
/// Before the start time a trajectory is frozen at its starting point, and
/// after its last knot it stays at its final point.
pub trait Trajectory {
    fn dim(&self) -> usize;
    fn start_time(&self) -> f64;
    fn eval(&self, t: f64) -> Point;

    /// Visits the linear pieces of the trajectory over `[a, b]` in time
    /// order, clipped to that window. Stops early and returns `false` as soon
    /// as the visitor returns `false`.
    fn visit_segments(&self, a: f64, b: f64, visit: &mut dyn FnMut(&Segment) -> bool) -> bool;

    /// Time after which the path no longer exists (killed particles).
    fn end_time(&self) -> f64 {
        f64::INFINITY
    }
}

/// A piecewise-linear path through samples `(times[k], positions[k])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledPath {
    dim: usize,
    times: Vec<f64>,
    /// Flat, `dim` values per sample.
    positions: Vec<f64>,
}

impl SampledPath {
    pub fn new(dim: usize, times: Vec<f64>, positions: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidPath(format!("unsupported dimension {dim}")));
        }
        if times.is_empty() {
            return Err(Error::InvalidPath("no samples".into()));
        }
        if positions.len() != times.len() * dim {
            return Err(Error::InvalidPath(format!(
                "{} coordinates for {} samples of dimension {dim}",
                positions.len(),
                times.len()
            )));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPath(format!("times not strictly increasing at {}", w[0])));
        }
        if times.iter().chain(&positions).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPath("non-finite sample".into()));
        }
        Ok(Self { dim, times, positions })
    }

    pub fn from_1d(times: Vec<f64>, xs: Vec<f64>) -> Result<Self> {
        Self::new(1, times, xs)
    }

    /// A path sitting at `point` from `start_time` on.
    pub fn constant(start_time: f64, point: &[f64]) -> Self {
        Self { dim: point.len(), times: vec![start_time], positions: point.to_vec() }
    }

    /// Unchecked constructor for callers that build samples incrementally.
    pub(crate) fn from_parts(dim: usize, times: Vec<f64>, positions: Vec<f64>) -> Self {
        debug_assert_eq!(positions.len(), times.len() * dim);
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
        Self { dim, times, positions }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sample(&self, k: usize) -> &[f64] {
        &self.positions[k * self.dim..(k + 1) * self.dim]
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    fn point(&self, k: usize) -> Point {
        let mut p = [0.0; MAX_DIM];
        p[..self.dim].copy_from_slice(self.sample(k));
        p
    }

    /// Index of the last sample with time `<= t` (0 if `t` precedes all).
    fn knot_at_or_before(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// One-dimensional evaluation.
    pub fn eval1(&self, t: f64) -> f64 {
        self.eval(t)[0]
    }
}

impl Trajectory for SampledPath {
    fn dim(&self) -> usize {
        self.dim
    }

    fn start_time(&self) -> f64 {
        self.times[0]
    }

    fn eval(&self, t: f64) -> Point {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.point(0);
        }
        if t >= self.times[n - 1] {
            return self.point(n - 1);
        }
        let k = self.knot_at_or_before(t);
        let seg = Segment { t0: self.times[k], x0: self.point(k), t1: self.times[k + 1], x1: self.point(k + 1) };
        seg.at(t, self.dim)
    }

    fn visit_segments(&self, a: f64, b: f64, visit: &mut dyn FnMut(&Segment) -> bool) -> bool {
        if b < a {
            return true;
        }
        let n = self.times.len();
        let first = self.times[0];
        let last = self.times[n - 1];
        // frozen before the start
        if a < first {
            let p = self.point(0);
            let seg = Segment { t0: a, x0: p, t1: b.min(first), x1: p };
            if !visit(&seg) {
                return false;
            }
        }
        let lo = a.max(first);
        let hi = b.min(last);
        if lo < hi {
            let mut k = self.knot_at_or_before(lo);
            while k + 1 < n && self.times[k] < hi {
                let full = Segment {
                    t0: self.times[k],
                    x0: self.point(k),
                    t1: self.times[k + 1],
                    x1: self.point(k + 1),
                };
                let t0 = full.t0.max(lo);
                let t1 = full.t1.min(hi);
                if t1 > t0 {
                    let seg = Segment { t0, x0: full.at(t0, self.dim), t1, x1: full.at(t1, self.dim) };
                    if !visit(&seg) {
                        return false;
                    }
                }
                k += 1;
            }
        }
        if b > last {
            let p = self.point(n - 1);
            let seg = Segment { t0: a.max(last), x0: p, t1: b, x1: p };
            if !visit(&seg) {
                return false;
            }
        }
        true
    }
}
