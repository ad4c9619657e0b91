//! Sierpinski gasket graphs and walks on them.
//!
//! Vertices are stored in integer coordinates `(p, q)`: the planar point is
//! `(p · 2^{-n-1}, q · 2^{-n} · √3/2)` at level `n`. Internally the
//! triangular-lattice coordinates `a = (p - q) / 2`, `b = q` are used, in
//! which an upward triangle with corner `(a0, b0)` and side `s` is
//! `{a >= a0, b >= b0, (a - a0) + (b - b0) <= s}`. All adjacency and
//! membership decisions are integer comparisons.

mod tri;
mod walk;

pub use tri::{Triangle, TriPrism, TriTube};
pub use walk::{
    coalescence_time, gasket_walk, mean_squared_displacement, simulate_coalescing_gasket, survivor_count_gasket,
    survivor_trajectory_gasket,
};

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default cap on the number of smallest triangles `3^{n+m}`.
pub const DEFAULT_TRIANGLE_CAP: u64 = 1_594_323; // 3^13

pub(crate) const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// The level-`n` gasket graph on the triangle of side `2^m` with a corner at
/// the origin. Edges have length `2^{-n}`.
#[derive(Debug, Clone)]
pub struct GasketGraph {
    n: u32,
    m: u32,
    coords: Vec<[i64; 2]>,
    offsets: Vec<u32>,
    nbrs: Vec<u32>,
    index: HashMap<[i64; 2], u32>,
}

/// JSON export of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: u32,
    pub m: u32,
    pub vertices: Vec<[i64; 2]>,
    pub edges: Vec<[usize; 2]>,
}

/// Builds the gasket graph with the default resource cap.
pub fn build_gasket(n: u32, m: u32) -> Result<GasketGraph> {
    build_gasket_capped(n, m, DEFAULT_TRIANGLE_CAP)
}

/// Builds the gasket graph, refusing when `3^{n+m}` exceeds `cap`.
pub fn build_gasket_capped(n: u32, m: u32, cap: u64) -> Result<GasketGraph> {
    let depth = n + m;
    let triangles = 3u64.checked_pow(depth).filter(|&c| c <= cap).ok_or_else(|| {
        Error::ResourceGuard(format!("gasket with n + m = {depth} needs 3^{depth} triangles, cap is {cap}"))
    })?;
    if depth > 40 {
        return Err(Error::ResourceGuard(format!("n + m = {depth} is too deep")));
    }
    // corners (a, b) of the unit triangles, by repeated subdivision
    let mut corners: Vec<[i64; 2]> = vec![[0, 0]];
    let mut side = 1i64 << depth;
    while side > 1 {
        side /= 2;
        let mut next = Vec::with_capacity(corners.len() * 3);
        for &[a, b] in &corners {
            next.push([a, b]);
            next.push([a + side, b]);
            next.push([a, b + side]);
        }
        corners = next;
    }
    debug_assert_eq!(corners.len() as u64, triangles);

    let to_pq = |[a, b]: [i64; 2]| [2 * a + b, b];
    let mut vertex_set = BTreeSet::new();
    for &[a, b] in &corners {
        for v in [[a, b], [a + 1, b], [a, b + 1]] {
            vertex_set.insert(to_pq(v));
        }
    }
    let coords: Vec<[i64; 2]> = vertex_set.into_iter().collect();
    let index: HashMap<[i64; 2], u32> = coords.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); coords.len()];
    for &[a, b] in &corners {
        let v = [[a, b], [a + 1, b], [a, b + 1]].map(|c| index[&to_pq(c)]);
        for (x, y) in [(0, 1), (1, 2), (2, 0)] {
            adj[v[x] as usize].push(v[y]);
            adj[v[y] as usize].push(v[x]);
        }
    }
    let mut offsets = Vec::with_capacity(coords.len() + 1);
    let mut nbrs = Vec::new();
    offsets.push(0);
    for mut list in adj {
        list.sort_unstable();
        list.dedup();
        nbrs.extend(list);
        offsets.push(nbrs.len() as u32);
    }
    Ok(GasketGraph { n, m, coords, offsets, nbrs, index })
}

impl GasketGraph {
    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn extent(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Integer coordinates `(p, q)` of vertex `v`.
    pub fn coords(&self, v: usize) -> [i64; 2] {
        self.coords[v]
    }

    /// Triangular-lattice coordinates `(a, b)` in units of `2^{-n}`.
    pub fn lattice(&self, v: usize) -> [i64; 2] {
        let [p, q] = self.coords[v];
        [(p - q) / 2, q]
    }

    pub fn vertex(&self, pq: [i64; 2]) -> Option<usize> {
        self.index.get(&pq).map(|&v| v as usize)
    }

    /// Vertex with lattice coordinates `(a, b)`.
    pub fn vertex_lattice(&self, [a, b]: [i64; 2]) -> Option<usize> {
        self.vertex([2 * a + b, b])
    }

    /// Vertex at a planar point, if there is one.
    pub fn vertex_at(&self, point: &[f64]) -> Option<usize> {
        let scale = (1u64 << self.n) as f64;
        let p = (point[0] * 2.0 * scale).round();
        let q = (point[1] / SQRT3_2 * scale).round();
        let back = self.position_pq([p as i64, q as i64]);
        if (back[0] - point[0]).abs() > 1e-9 || (back[1] - point[1]).abs() > 1e-9 {
            return None;
        }
        self.vertex([p as i64, q as i64])
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    fn position_pq(&self, [p, q]: [i64; 2]) -> [f64; 2] {
        let scale = (1u64 << self.n) as f64;
        [p as f64 / (2.0 * scale), q as f64 / scale * SQRT3_2]
    }

    /// Planar position of vertex `v`.
    pub fn position(&self, v: usize) -> [f64; 2] {
        self.position_pq(self.coords[v])
    }

    /// Time between jumps, `5^{-n}`.
    pub fn time_step(&self) -> f64 {
        5f64.powi(-(self.n as i32))
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::with_capacity(self.nbrs.len() / 2);
        for v in 0..self.len() {
            for &w in self.neighbors(v) {
                if v < w as usize {
                    out.push([v, w as usize]);
                }
            }
        }
        out
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile { n: self.n, m: self.m, vertices: self.coords.clone(), edges: self.edges() }
    }
}
