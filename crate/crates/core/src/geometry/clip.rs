//! Exact crossing test for piecewise-linear paths.
//!
//! Each linear piece of a path is clipped against every convex piece of the
//! tube body; the path stays inside the body on `[t0, t1]` iff the clipped
//! parameter intervals cover every piece. No time sampling is involved.

use super::path::{Segment, Trajectory};
use super::tube::PolyTube;

/// A tube made of convex space-time pieces with flat faces.
pub trait TubeShape {
    fn spatial_dim(&self) -> usize;
    fn start_time(&self) -> f64;
    fn end_time(&self) -> f64;
    fn in_lower_face(&self, x: &[f64], tol: f64) -> bool;
    fn in_upper_face(&self, x: &[f64], tol: f64) -> bool;
    /// Pushes the parameter intervals `[s0, s1] ⊆ [0, 1]` on which `seg`
    /// lies in the (tolerance-enlarged) body.
    fn clip_segment(&self, seg: &Segment, tol: f64, out: &mut Vec<(f64, f64)>);
}

/// Parameter interval on which `p(s) = p0 + s (p1 - p0)`, `s ∈ [0,1]`, lies in
/// the box `[lo - tol, hi + tol]`. Coordinates are `(space..., time)`.
pub fn segment_box_interval(p0: &[f64], p1: &[f64], lo: &[f64], hi: &[f64], tol: f64) -> Option<(f64, f64)> {
    let mut s0: f64 = 0.0;
    let mut s1: f64 = 1.0;
    for i in 0..lo.len() {
        let a = lo[i] - tol;
        let b = hi[i] + tol;
        let d = p1[i] - p0[i];
        if d == 0.0 {
            if p0[i] < a || p0[i] > b {
                return None;
            }
            continue;
        }
        let (mut u, mut v) = ((a - p0[i]) / d, (b - p0[i]) / d);
        if u > v {
            std::mem::swap(&mut u, &mut v);
        }
        s0 = s0.max(u);
        s1 = s1.min(v);
        if s0 > s1 {
            return None;
        }
    }
    Some((s0, s1))
}

/// Whether closed intervals cover `[0, 1]` (sorted in place).
pub fn covers_unit_interval(intervals: &mut [(f64, f64)]) -> bool {
    const EPS: f64 = 1e-12;
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = 0.0;
    for &(a, b) in intervals.iter() {
        if a > reach + EPS {
            return false;
        }
        reach = f64::max(reach, b);
        if reach >= 1.0 - EPS {
            return true;
        }
    }
    reach >= 1.0 - EPS
}

/// Crossing predicate for any tube shape.
///
/// The path must start no later than `t0`, sit on the lower face at `t0`,
/// stay in the body throughout and sit on the upper face at `t1`. Closed-set
/// semantics with tolerance `tol`.
pub fn crosses_shape<P, T>(path: &P, tube: &T, tol: f64) -> bool
where
    P: Trajectory + ?Sized,
    T: TubeShape + ?Sized,
{
    let (t0, t1) = (tube.start_time(), tube.end_time());
    let d = tube.spatial_dim();
    if path.dim() != d || path.start_time() > t0 + tol || path.end_time() < t1 {
        return false;
    }
    if !tube.in_lower_face(&path.eval(t0)[..d], tol) || !tube.in_upper_face(&path.eval(t1)[..d], tol) {
        return false;
    }
    let mut intervals = Vec::new();
    path.visit_segments(t0, t1, &mut |seg| {
        intervals.clear();
        tube.clip_segment(seg, tol, &mut intervals);
        covers_unit_interval(&mut intervals)
    })
}

/// Whether `path` crosses the box tube `tube`.
pub fn crosses<P: Trajectory + ?Sized>(path: &P, tube: &PolyTube, tol: f64) -> bool {
    crosses_shape(path, tube, tol)
}
