use serde::{Deserialize, Serialize};

use super::{GasketGraph, SQRT3_2};
use crate::geometry::{Segment, TubeShape};
use crate::{Error, Result};

/// The upward triangle `z + 2^{-k} △₀`, with `z` given in triangular-lattice
/// coordinates of `2^{-k} ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triangle {
    pub k: i32,
    pub z: [i64; 2],
}

/// Planar point to real triangular-lattice coordinates.
fn to_lattice(x: &[f64]) -> [f64; 2] {
    let b = x[1] / SQRT3_2;
    [x[0] - b / 2.0, b]
}

impl Triangle {
    pub fn new(k: i32, z: [i64; 2]) -> Self {
        Self { k, z }
    }

    pub fn side(&self) -> f64 {
        2f64.powi(-self.k)
    }

    /// `(a0, b0, a0 + b0 + side)` in real lattice coordinates.
    fn bounds(&self) -> [f64; 3] {
        let s = self.side();
        let (a, b) = (self.z[0] as f64 * s, self.z[1] as f64 * s);
        [a, b, a + b + s]
    }

    /// Scaled integer description `(a0, b0, side)` in units of `2^{-e}`.
    fn scaled(&self, e: i32) -> [i128; 3] {
        let f = 1i128 << (e - self.k);
        [self.z[0] as i128 * f, self.z[1] as i128 * f, f]
    }

    /// Exact membership of a graph vertex (closed triangle).
    pub fn contains_vertex(&self, g: &GasketGraph, v: usize) -> bool {
        let n = g.level() as i32;
        let e = n.max(self.k);
        let [a0, b0, s] = self.scaled(e);
        let f = 1i128 << (e - n);
        let [a, b] = g.lattice(v);
        let (a, b) = (a as i128 * f - a0, b as i128 * f - b0);
        a >= 0 && b >= 0 && a + b <= s
    }

    /// Whether `v` is one of the three apices.
    pub fn is_apex(&self, g: &GasketGraph, v: usize) -> bool {
        let n = g.level() as i32;
        let e = n.max(self.k);
        let [a0, b0, s] = self.scaled(e);
        let f = 1i128 << (e - n);
        let [a, b] = g.lattice(v);
        let (a, b) = (a as i128 * f - a0, b as i128 * f - b0);
        matches!((a, b), (0, 0)) || (a == s && b == 0) || (a == 0 && b == s)
    }

    /// Closed membership of a planar point, with tolerance in lattice units.
    pub fn contains_point(&self, x: &[f64], tol: f64) -> bool {
        let [a, b] = to_lattice(x);
        let [a0, b0, c] = self.bounds();
        a >= a0 - tol && b >= b0 - tol && a + b <= c + tol
    }

    pub fn intersects(&self, other: &Triangle) -> bool {
        let [a1, b1, c1] = self.bounds();
        let [a2, b2, c2] = other.bounds();
        a1.max(a2) + b1.max(b2) <= c1.min(c2)
    }

    /// Apex positions in the plane.
    pub fn apices(&self) -> [[f64; 2]; 3] {
        let [a, b, _] = self.bounds();
        let s = self.side();
        let plane = |a: f64, b: f64| [a + b / 2.0, b * SQRT3_2];
        [plane(a, b), plane(a + s, b), plane(a, b + s)]
    }
}

/// A triangular prism `△ × [s, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriPrism {
    pub triangle: Triangle,
    pub s: f64,
    pub t: f64,
}

impl TriPrism {
    pub fn new(triangle: Triangle, s: f64, t: f64) -> Result<Self> {
        if !(s < t) {
            return Err(Error::InvalidTube(format!("prism needs s < t, got [{s}, {t}]")));
        }
        Ok(Self { triangle, s, t })
    }
}

/// A tube made of triangular prisms; faces are the slices at the extreme
/// times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TriPrism>", into = "Vec<TriPrism>")]
pub struct TriTube {
    pieces: Vec<TriPrism>,
    t0: f64,
    t1: f64,
}

impl TryFrom<Vec<TriPrism>> for TriTube {
    type Error = Error;

    fn try_from(pieces: Vec<TriPrism>) -> Result<Self> {
        TriTube::new(pieces)
    }
}

impl From<TriTube> for Vec<TriPrism> {
    fn from(t: TriTube) -> Self {
        t.pieces
    }
}

impl TriTube {
    pub fn new(pieces: Vec<TriPrism>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidTube("no pieces".into()));
        }
        for p in &pieces {
            TriPrism::new(p.triangle, p.s, p.t)?;
        }
        let t0 = pieces.iter().map(|p| p.s).fold(f64::INFINITY, f64::min);
        let t1 = pieces.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max);
        // connectivity of the union
        let mut seen = vec![false; pieces.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..pieces.len() {
                let (a, b) = (&pieces[i], &pieces[j]);
                if !seen[j] && a.s.max(b.s) <= a.t.min(b.t) && a.triangle.intersects(&b.triangle) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidTube("pieces do not form a connected set".into()));
        }
        Ok(Self { pieces, t0, t1 })
    }

    pub fn prism(triangle: Triangle, s: f64, t: f64) -> Result<Self> {
        Self::new(vec![TriPrism::new(triangle, s, t)?])
    }

    pub fn pieces(&self) -> &[TriPrism] {
        &self.pieces
    }

    /// Triangles of the spatial footprint.
    pub fn footprint(&self) -> Vec<Triangle> {
        let mut out: Vec<Triangle> = self.pieces.iter().map(|p| p.triangle).collect();
        out.dedup();
        out
    }
}

/// Parameter interval of `p0 + s (p1 - p0)`, `s ∈ [0, 1]`, satisfying all
/// constraints `w · p <= c`.
fn clip_halfspaces(p0: &[f64; 3], p1: &[f64; 3], constraints: &[([f64; 3], f64)]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (w, c) in constraints {
        let f0 = w[0] * p0[0] + w[1] * p0[1] + w[2] * p0[2];
        let f1 = w[0] * p1[0] + w[1] * p1[1] + w[2] * p1[2];
        let d = f1 - f0;
        if d == 0.0 {
            if f0 > *c {
                return None;
            }
            continue;
        }
        let s = (c - f0) / d;
        if d > 0.0 {
            hi = hi.min(s);
        } else {
            lo = lo.max(s);
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

impl TubeShape for TriTube {
    fn spatial_dim(&self) -> usize {
        2
    }

    fn start_time(&self) -> f64 {
        self.t0
    }

    fn end_time(&self) -> f64 {
        self.t1
    }

    fn in_lower_face(&self, x: &[f64], tol: f64) -> bool {
        self.pieces.iter().any(|p| p.s == self.t0 && p.triangle.contains_point(x, tol))
    }

    fn in_upper_face(&self, x: &[f64], tol: f64) -> bool {
        self.pieces.iter().any(|p| p.t == self.t1 && p.triangle.contains_point(x, tol))
    }

    fn clip_segment(&self, seg: &Segment, tol: f64, out: &mut Vec<(f64, f64)>) {
        let [a0, b0] = to_lattice(&seg.x0);
        let [a1, b1] = to_lattice(&seg.x1);
        let p0 = [a0, b0, seg.t0];
        let p1 = [a1, b1, seg.t1];
        for piece in &self.pieces {
            let [a, b, c] = piece.triangle.bounds();
            let cons = [
                ([-1.0, 0.0, 0.0], -a + tol),
                ([0.0, -1.0, 0.0], -b + tol),
                ([1.0, 1.0, 0.0], c + tol),
                ([0.0, 0.0, -1.0], -piece.s + tol),
                ([0.0, 0.0, 1.0], piece.t + tol),
            ];
            if let Some(iv) = clip_halfspaces(&p0, &p1, &cons) {
                out.push(iv);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gasket::build_gasket;
    use crate::geometry::{crosses_shape, SampledPath};

    #[test]
    fn vertex_membership_is_exact() {
        let g = build_gasket(3, 0).unwrap();
        let tri = Triangle::new(1, [0, 0]);
        let inside = (0..g.len()).filter(|&v| tri.contains_vertex(&g, v)).count();
        // a level-1 sub-triangle holds the level-2 gasket of its own
        assert_eq!(inside, 15);
        let apices = (0..g.len()).filter(|&v| tri.is_apex(&g, v)).count();
        assert_eq!(apices, 3);
        for v in 0..g.len() {
            assert_eq!(tri.contains_vertex(&g, v), tri.contains_point(&g.position(v), 1e-12));
        }
    }

    #[test]
    fn constant_path_inside_crosses() {
        let tube = TriTube::prism(Triangle::new(0, [0, 0]), 0.0, 1.0).unwrap();
        let inside = SampledPath::constant(0.0, &[0.5, 0.2]);
        assert!(crosses_shape(&inside, &tube, 1e-9));
        let outside = SampledPath::constant(0.0, &[1.5, 0.2]);
        assert!(!crosses_shape(&outside, &tube, 1e-9));
    }

    #[test]
    fn leaving_through_the_side_fails() {
        let tube = TriTube::prism(Triangle::new(0, [0, 0]), 0.0, 1.0).unwrap();
        let p = SampledPath::new(2, vec![0.0, 0.5, 1.0], vec![0.5, 0.1, 0.5, -0.2, 0.5, 0.1]).unwrap();
        assert!(!crosses_shape(&p, &tube, 1e-9));
    }

    #[test]
    fn disconnected_prisms_are_rejected() {
        let a = TriPrism::new(Triangle::new(1, [0, 0]), 0.0, 1.0).unwrap();
        let b = TriPrism::new(Triangle::new(2, [3, 0]), 0.0, 1.0).unwrap();
        assert!(TriTube::new(vec![a, b]).is_err());
        let c = TriPrism::new(Triangle::new(1, [1, 0]), 0.5, 2.0).unwrap();
        assert!(TriTube::new(vec![a, c]).is_ok());
    }
}
