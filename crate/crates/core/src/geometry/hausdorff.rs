use super::tube::{Cuboid, PolyTube};
use crate::{Error, Result};

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Hausdorff distance between two finite point sets (Euclidean).
///
/// Brute force with early break: the inner scan for a point stops as soon
/// as it finds a neighbour closer than the running maximum.
pub fn hausdorff_distance<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let dim = a[0].as_ref().len();
    if let Some(p) = a.iter().chain(b).find(|p| p.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.as_ref().len() });
    }
    Ok(directed(a, b).max(directed(b, a)).sqrt())
}

/// Squared directed distance `sup_{x∈from} inf_{y∈to} |x - y|²`.
fn directed<P: AsRef<[f64]>>(from: &[P], to: &[P]) -> f64 {
    let mut worst = 0.0f64;
    for x in from {
        let x = x.as_ref();
        let mut best = f64::INFINITY;
        for y in to {
            let d = dist2(x, y.as_ref());
            if d < best {
                best = d;
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// Value of the tube metric together with its sampling error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeDistance {
    pub value: f64,
    /// The exact metric lies in `[value, value + error_bound]`.
    pub error_bound: f64,
    pub mesh: f64,
}

fn one_sided(samples: &[Vec<f64>], target: &[Cuboid]) -> f64 {
    samples
        .iter()
        .map(|p| target.iter().map(|c| c.distance(p)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two box unions: each side is sampled on a
/// grid and measured exactly against the other side's boxes.
fn union_distance(a: &[Cuboid], b: &[Cuboid], mesh: f64) -> (f64, f64) {
    let sa: Vec<Vec<f64>> = a.iter().flat_map(|c| c.grid(mesh)).collect();
    let sb: Vec<Vec<f64>> = b.iter().flat_map(|c| c.grid(mesh)).collect();
    let value = one_sided(&sa, b).max(one_sided(&sb, a));
    // a grid cell has half-diagonal mesh·√D/2 in the box's nonflat axes
    let axes = a.iter().chain(b).map(|c| (0..c.dim()).filter(|&i| c.hi()[i] > c.lo()[i]).count()).max().unwrap_or(0);
    (value, 0.5 * mesh * (axes as f64).sqrt())
}

/// Tube metric: Hausdorff distance of bodies plus those of lower and upper
/// faces, with faces taken as flat sets in space-time.
///
/// `mesh` defaults to 1% of the diameter of the joint bounding box.
pub fn tube_distance(t1: &PolyTube, t2: &PolyTube, mesh: Option<f64>) -> Result<TubeDistance> {
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch { expected: t1.dim(), got: t2.dim() });
    }
    let mesh = match mesh {
        Some(m) if m > 0.0 => m,
        Some(m) => return Err(Error::param("mesh", format!("must be positive, got {m}"))),
        None => 1e-2 * joint_diameter(t1, t2),
    };
    let (body, e0) = union_distance(t1.pieces(), t2.pieces(), mesh);
    let (low, e1) = union_distance(&t1.lower_face_boxes(), &t2.lower_face_boxes(), mesh);
    let (up, e2) = union_distance(&t1.upper_face_boxes(), &t2.upper_face_boxes(), mesh);
    Ok(TubeDistance { value: body + low + up, error_bound: e0 + e1 + e2, mesh })
}

fn joint_diameter(t1: &PolyTube, t2: &PolyTube) -> f64 {
    let d = t1.dim() + 1;
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for c in t1.pieces().iter().chain(t2.pieces()) {
        for i in 0..d {
            lo[i] = lo[i].min(c.lo()[i]);
            hi[i] = hi[i].max(c.hi()[i]);
        }
    }
    dist2(&lo, &hi).sqrt()
}
