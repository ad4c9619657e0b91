use rand::RngCore;

use super::{GasketGraph, Triangle};
use crate::coalesce::{sweep, CoalescingSystem, FreeFeed, MeetMode};
use crate::geometry::{Point, SampledPath};
use crate::noise::{index_below, replica_seed, stream_rng, NoiseField};
use crate::{map_replicas, Error, Result};

const GASKET_STREAM: u64 = 31;
const FREE_WALK_STREAM: u64 = 32;

fn start_vertex(g: &GasketGraph, pq: [i64; 2]) -> Result<usize> {
    g.vertex(pq).ok_or_else(|| Error::NotAVertex(format!("({}, {}) is not a vertex of the level-{} graph", pq[0], pq[1], g.level())))
}

#[inline]
fn jump(g: &GasketGraph, v: usize, word: u64) -> usize {
    let nb = g.neighbors(v);
    nb[index_below(word, nb.len())] as usize
}

/// A simple random walk of `steps` jumps from the vertex with coordinates
/// `start`, one jump every `5^{-n}` time units from time 0.
pub fn gasket_walk(g: &GasketGraph, start: [i64; 2], steps: u64, seed: u64) -> Result<SampledPath> {
    let mut v = start_vertex(g, start)?;
    let mut rng = stream_rng(seed, FREE_WALK_STREAM);
    let dt = g.time_step();
    let mut times = Vec::with_capacity(steps as usize + 1);
    let mut pos = Vec::with_capacity(2 * (steps as usize + 1));
    times.push(0.0);
    pos.extend_from_slice(&g.position(v));
    for k in 1..=steps {
        v = jump(g, v, rng.next_u64());
        times.push(k as f64 * dt);
        pos.extend_from_slice(&g.position(v));
    }
    SampledPath::new(2, times, pos)
}

/// `E|X_t - X_0|²` at the given step counts, over `walks` independent walks
/// from vertex `start`.
pub fn mean_squared_displacement(g: &GasketGraph, start: usize, steps: &[u64], walks: u64, seed: u64) -> Vec<f64> {
    let t_max = steps.iter().copied().max().unwrap_or(0);
    let x0 = g.position(start);
    let per_walk: Vec<Vec<f64>> = map_replicas(walks, |r| {
        let mut rng = stream_rng(replica_seed(seed, r), FREE_WALK_STREAM);
        let mut v = start;
        let mut out = Vec::with_capacity(steps.len());
        let mut next = 0;
        let mut order: Vec<usize> = (0..steps.len()).collect();
        order.sort_by_key(|&i| steps[i]);
        let mut d2 = vec![0.0; steps.len()];
        for k in 0..=t_max {
            if k > 0 {
                v = jump(g, v, rng.next_u64());
            }
            while next < order.len() && steps[order[next]] == k {
                let x = g.position(v);
                d2[order[next]] = (x[0] - x0[0]).powi(2) + (x[1] - x0[1]).powi(2);
                next += 1;
            }
        }
        out.extend(d2);
        out
    });
    (0..steps.len()).map(|i| per_walk.iter().map(|w| w[i]).sum::<f64>() / walks.max(1) as f64).collect()
}

struct GasketFeed<'a> {
    g: &'a GasketGraph,
    noise: NoiseField,
    starts: Vec<(usize, i64)>,
    at: Vec<usize>,
    last_index: i64,
}

impl FreeFeed for GasketFeed<'_> {
    fn dim(&self) -> usize {
        2
    }

    fn count(&self) -> usize {
        self.starts.len()
    }

    fn start_index(&self, j: usize) -> i64 {
        self.starts[j].1
    }

    fn sample(&mut self, j: usize, k: i64) -> Option<(f64, Point)> {
        if k == self.starts[j].1 {
            self.at[j] = self.starts[j].0;
        } else {
            if k > self.last_index {
                return None;
            }
            let v = self.at[j];
            self.at[j] = jump(self.g, v, self.noise.word(v as i64, k - 1));
        }
        let [x, y] = self.g.position(self.at[j]);
        Some((k as f64 * self.g.time_step(), [x, y, 0.0]))
    }
}

/// Coalescing walks on the gasket from planar space-time starts `[x, y, t]`.
/// All walkers on a vertex at a given time jump to the same neighbour.
pub fn simulate_coalescing_gasket(g: &GasketGraph, starts: &[[f64; 3]], horizon: f64, seed: u64) -> Result<CoalescingSystem> {
    let dt = g.time_step();
    let mut sites = Vec::with_capacity(starts.len());
    for &[x, y, t] in starts {
        let v = g.vertex_at(&[x, y]).ok_or_else(|| Error::NotAVertex(format!("({x}, {y})")))?;
        let r = t / dt;
        if (r - r.round()).abs() > 1e-6 {
            return Err(Error::OffLattice { x, t });
        }
        sites.push((v, r.round() as i64));
    }
    let mut feed = GasketFeed {
        g,
        noise: NoiseField::new(seed, GASKET_STREAM),
        at: vec![0; sites.len()],
        starts: sites,
        last_index: (horizon / dt + 1e-9).floor() as i64,
    };
    Ok(sweep(&mut feed, MeetMode::GridEquality))
}

/// Step at which walkers from `starts`, driven by the shared vertex-time
/// noise, first all sit on one vertex (`None` if not within `max_steps`).
pub fn coalescence_time(g: &GasketGraph, starts: &[usize], max_steps: u64, seed: u64) -> Option<u64> {
    let noise = NoiseField::new(seed, GASKET_STREAM);
    let mut at: Vec<usize> = starts.to_vec();
    at.sort_unstable();
    at.dedup();
    for k in 0..=max_steps {
        if at.len() <= 1 {
            return Some(k);
        }
        if k == max_steps {
            break;
        }
        for v in at.iter_mut() {
            *v = jump(g, *v, noise.word(*v as i64, k as i64));
        }
        at.sort_unstable();
        at.dedup();
    }
    None
}

/// Distinct survivors after each step, from one walker per vertex of the
/// region, killing walkers that step outside it. Runs `⌈δ 5^n⌉` steps.
pub fn survivor_trajectory_gasket(g: &GasketGraph, region: &[Triangle], delta: f64, seed: u64) -> Result<Vec<usize>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", "must be positive"));
    }
    if region.is_empty() {
        return Err(Error::param("region", "must contain a triangle"));
    }
    let inside: Vec<bool> = (0..g.len()).map(|v| region.iter().any(|t| t.contains_vertex(g, v))).collect();
    let steps = (delta / g.time_step() - 1e-9).ceil() as i64;
    let noise = NoiseField::new(seed, GASKET_STREAM);
    let mut stamp = vec![u32::MAX; g.len()];
    let mut occupied: Vec<usize> = (0..g.len()).filter(|&v| inside[v]).collect();
    let mut next = Vec::with_capacity(occupied.len());
    let mut counts = vec![occupied.len()];
    for k in 0..steps {
        next.clear();
        for &v in &occupied {
            let w = jump(g, v, noise.word(v as i64, k));
            if inside[w] && stamp[w] != k as u32 {
                stamp[w] = k as u32;
                next.push(w);
            }
        }
        std::mem::swap(&mut occupied, &mut next);
        counts.push(occupied.len());
    }
    Ok(counts)
}

/// Distinct survivors at time `δ`.
pub fn survivor_count_gasket(g: &GasketGraph, region: &[Triangle], delta: f64, seed: u64) -> Result<usize> {
    Ok(*survivor_trajectory_gasket(g, region, delta, seed)?.last().expect("nonempty"))
}
