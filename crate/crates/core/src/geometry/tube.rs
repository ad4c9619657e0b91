use serde::{Deserialize, Serialize};

use super::clip::{segment_box_interval, TubeShape};
use super::path::Segment;
use crate::{Error, Result};

/// Closed axis-aligned box `[lo_0, hi_0] × … × [lo_k, hi_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cuboid {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Cuboid {
    /// Strictly nondegenerate box.
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.is_empty() {
            return Err(Error::EmptySet);
        }
        for (axis, (&a, &b)) in lo.iter().zip(&hi).enumerate() {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::DegenerateBox { axis, lo: a, hi: b });
            }
        }
        Ok(Self { lo, hi })
    }

    /// Closed box that may be flat in some coordinates.
    pub(crate) fn closed(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b));
        Self { lo, hi }
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        self.lo.iter().zip(&self.hi).zip(p).all(|((&a, &b), &x)| x >= a - tol && x <= b + tol)
    }

    /// Euclidean distance from `p` to the box.
    pub fn distance(&self, p: &[f64]) -> f64 {
        let mut acc = 0.0;
        for ((&a, &b), &x) in self.lo.iter().zip(&self.hi).zip(p) {
            let d = if x < a {
                a - x
            } else if x > b {
                x - b
            } else {
                0.0
            };
            acc += d * d;
        }
        acc.sqrt()
    }

    pub fn intersects(&self, other: &Cuboid) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    /// L∞ enlargement by `delta`.
    pub fn expand(&self, delta: f64) -> Cuboid {
        Cuboid::closed(self.lo.iter().map(|v| v - delta).collect(), self.hi.iter().map(|v| v + delta).collect())
    }

    /// Grid points at spacing at most `mesh` in every coordinate, both ends
    /// included.
    pub fn grid(&self, mesh: f64) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| {
                let steps = ((b - a) / mesh).ceil().max(0.0) as usize;
                if steps == 0 {
                    return vec![a];
                }
                (0..=steps).map(|k| if k == steps { b } else { a + (b - a) * k as f64 / steps as f64 }).collect()
            })
            .collect();
        let mut out = vec![Vec::with_capacity(axes.len())];
        for axis in &axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn spatial(&self) -> Cuboid {
        let d = self.dim() - 1;
        Cuboid::closed(self.lo[..d].to_vec(), self.hi[..d].to_vec())
    }

    fn t_lo(&self) -> f64 {
        self.lo[self.dim() - 1]
    }

    fn t_hi(&self) -> f64 {
        self.hi[self.dim() - 1]
    }
}

/// Whether two finite unions of boxes cover the same set up to null sets.
fn same_union(a: &[Cuboid], b: &[Cuboid]) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    let dim = a[0].dim();
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); dim];
    for c in a.iter().chain(b) {
        for i in 0..dim {
            cuts[i].push(c.lo[i]);
            cuts[i].push(c.hi[i]);
        }
    }
    for axis in &mut cuts {
        axis.sort_by(f64::total_cmp);
        axis.dedup();
    }
    let mut idx = vec![0usize; dim];
    let mut center = vec![0.0; dim];
    loop {
        for i in 0..dim {
            center[i] = 0.5 * (cuts[i][idx[i]] + cuts[i][idx[i] + 1]);
        }
        let in_a = a.iter().any(|c| c.contains(&center, 0.0));
        let in_b = b.iter().any(|c| c.contains(&center, 0.0));
        if in_a != in_b {
            return false;
        }
        let mut i = 0;
        loop {
            if i == dim {
                return true;
            }
            idx[i] += 1;
            if idx[i] + 1 < cuts[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// On-disk box of a tube description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubePiece {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Tube description file: `{"dim", "pieces", "t0", "t1"}`. Faces are derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeFile {
    pub dim: usize,
    pub pieces: Vec<TubePiece>,
    pub t0: f64,
    pub t1: f64,
}

/// A tube whose body is a finite connected union of boxes and whose faces
/// are the time slices of the body at its start and end times.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTube {
    dim: usize,
    pieces: Vec<Cuboid>,
    t0: f64,
    t1: f64,
    lower: Vec<Cuboid>,
    upper: Vec<Cuboid>,
}

impl PolyTube {
    pub fn new(dim: usize, pieces: Vec<Cuboid>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidTube("no pieces".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.dim() != dim + 1) {
            return Err(Error::DimensionMismatch { expected: dim + 1, got: p.dim() });
        }
        let t0 = pieces.iter().map(Cuboid::t_lo).fold(f64::INFINITY, f64::min);
        let t1 = pieces.iter().map(Cuboid::t_hi).fold(f64::NEG_INFINITY, f64::max);
        if !connected(&pieces) {
            return Err(Error::InvalidTube("pieces are not connected".into()));
        }
        let lower = pieces.iter().filter(|p| p.t_lo() == t0).map(Cuboid::spatial).collect();
        let upper = pieces.iter().filter(|p| p.t_hi() == t1).map(Cuboid::spatial).collect();
        Ok(Self { dim, pieces, t0, t1, lower, upper })
    }

    /// One-dimensional box tube `[x_lo, x_hi] × [t0, t1]` with full faces.
    pub fn rect(x_lo: f64, x_hi: f64, t0: f64, t1: f64) -> Result<Self> {
        Self::new(1, vec![Cuboid::new(vec![x_lo, t0], vec![x_hi, t1])?])
    }

    /// One-dimensional tube from `(x_lo, x_hi, t_lo, t_hi)` rectangles.
    pub fn from_rects(rects: &[(f64, f64, f64, f64)]) -> Result<Self> {
        let pieces = rects
            .iter()
            .map(|&(a, b, s, t)| Cuboid::new(vec![a, s], vec![b, t]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(1, pieces)
    }

    pub fn from_file(file: &TubeFile) -> Result<Self> {
        let pieces = file
            .pieces
            .iter()
            .map(|p| Cuboid::new(p.lo.clone(), p.hi.clone()))
            .collect::<Result<Vec<_>>>()?;
        let tube = Self::new(file.dim, pieces)?;
        if tube.t0 != file.t0 || tube.t1 != file.t1 {
            return Err(Error::InvalidTube(format!(
                "declared times [{}, {}] differ from the body's extent [{}, {}]",
                file.t0, file.t1, tube.t0, tube.t1
            )));
        }
        Ok(tube)
    }

    pub fn to_file(&self) -> TubeFile {
        TubeFile {
            dim: self.dim,
            pieces: self.pieces.iter().map(|c| TubePiece { lo: c.lo.clone(), hi: c.hi.clone() }).collect(),
            t0: self.t0,
            t1: self.t1,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Cuboid] {
        &self.pieces
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn lower_face(&self) -> &[Cuboid] {
        &self.lower
    }

    pub fn upper_face(&self) -> &[Cuboid] {
        &self.upper
    }

    /// Spatial bounding box of the body.
    pub fn spatial_hull(&self) -> Cuboid {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in &self.pieces {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p.lo[i]);
                hi[i] = hi[i].max(p.hi[i]);
            }
        }
        Cuboid::closed(lo, hi)
    }

    /// Lower face as a box in space-time (flat in time).
    pub(crate) fn lower_face_boxes(&self) -> Vec<Cuboid> {
        face_boxes(&self.lower, self.t0)
    }

    pub(crate) fn upper_face_boxes(&self) -> Vec<Cuboid> {
        face_boxes(&self.upper, self.t1)
    }

    /// Largest `t_e` such that the body is a product `face × interval` on
    /// `[t0, t0 + t_e]` and on `[t1 - t_e, t1]`, capped at half the duration.
    pub fn product_time(&self) -> f64 {
        let mut cuts: Vec<f64> = self.pieces.iter().flat_map(|p| [p.t_lo(), p.t_hi()]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let slice = |a: f64, b: f64| -> Vec<Cuboid> {
            self.pieces.iter().filter(|p| p.t_lo() <= a && p.t_hi() >= b).map(Cuboid::spatial).collect()
        };
        let mut lower = self.t1 - self.t0;
        for w in cuts.windows(2) {
            if !same_union(&slice(w[0], w[1]), &self.lower) {
                lower = w[0] - self.t0;
                break;
            }
        }
        let mut upper = self.t1 - self.t0;
        for w in cuts.windows(2).rev() {
            if !same_union(&slice(w[0], w[1]), &self.upper) {
                upper = self.t1 - w[1];
                break;
            }
        }
        lower.min(upper).min(0.5 * (self.t1 - self.t0))
    }

    /// The enlarged tube `T^δ`: the body fattened by `delta` in L∞, cut to the
    /// time slab `[t0 + δ, t1 - δ]`. Every path crossing `self` crosses it.
    pub fn enlarge(&self, delta: f64) -> Result<PolyTube> {
        let limit = self.product_time();
        if !(delta > 0.0 && delta < limit) {
            return Err(Error::EnlargementOutOfRange { delta, limit });
        }
        let (s, e) = (self.t0 + delta, self.t1 - delta);
        let d = self.dim;
        let pieces: Vec<Cuboid> = self
            .pieces
            .iter()
            .filter_map(|p| {
                let mut g = p.expand(delta);
                g.lo[d] = g.lo[d].max(s);
                g.hi[d] = g.hi[d].min(e);
                (g.lo[d] < g.hi[d]).then_some(g)
            })
            .collect();
        PolyTube::new(d, pieces)
    }
}

fn face_boxes(face: &[Cuboid], t: f64) -> Vec<Cuboid> {
    face.iter()
        .map(|c| {
            let mut lo = c.lo.clone();
            let mut hi = c.hi.clone();
            lo.push(t);
            hi.push(t);
            Cuboid::closed(lo, hi)
        })
        .collect()
}

fn connected(pieces: &[Cuboid]) -> bool {
    let mut seen = vec![false; pieces.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..pieces.len() {
            if !seen[j] && pieces[i].intersects(&pieces[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

impl TubeShape for PolyTube {
    fn spatial_dim(&self) -> usize {
        self.dim
    }

    fn start_time(&self) -> f64 {
        self.t0
    }

    fn end_time(&self) -> f64 {
        self.t1
    }

    fn in_lower_face(&self, x: &[f64], tol: f64) -> bool {
        self.lower.iter().any(|c| c.contains(x, tol))
    }

    fn in_upper_face(&self, x: &[f64], tol: f64) -> bool {
        self.upper.iter().any(|c| c.contains(x, tol))
    }

    fn clip_segment(&self, seg: &Segment, tol: f64, out: &mut Vec<(f64, f64)>) {
        let d = self.dim;
        let mut p0 = [0.0; 4];
        let mut p1 = [0.0; 4];
        p0[..d].copy_from_slice(&seg.x0[..d]);
        p1[..d].copy_from_slice(&seg.x1[..d]);
        p0[d] = seg.t0;
        p1[d] = seg.t1;
        for piece in &self.pieces {
            if let Some(iv) = segment_box_interval(&p0[..=d], &p1[..=d], &piece.lo, &piece.hi, tol) {
                out.push(iv);
            }
        }
    }
}

/// The chain `[T^δ for δ in deltas]` for strictly decreasing `deltas`.
///
/// Larger `δ` gives an easier tube: whatever crosses `T^δ` crosses `T^δ'` for
/// every `δ' > δ`.
pub fn superdense_family(tube: &PolyTube, deltas: &[f64]) -> Result<Vec<PolyTube>> {
    if deltas.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::param("deltas", "must be strictly decreasing"));
    }
    deltas.iter().map(|&d| tube.enlarge(d)).collect()
}
