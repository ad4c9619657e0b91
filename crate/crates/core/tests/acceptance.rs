//! Acceptance criteria, one line per criterion.
//!
//! `cargo test -p coalflow --test acceptance` runs all of them;
//! `ACCEPTANCE_ONLY=3,7` restricts the run.
//!
//! Criterion 2 is listed in `KNOWN_FAILING`: it is computed in full and
//! reported as FAIL, but does not fail the process on its own.

use std::time::Instant;

use coalflow::estimate::{estimate_joint_crossing, eta_ladder_study, n_ladder_study, Model, Tube};
use coalflow::experiment::{run_experiment, ExperimentConfig, Report};
use coalflow::gasket::{
    build_gasket, coalescence_time, gasket_walk, mean_squared_displacement, survivor_count_gasket, GasketGraph, Triangle,
};
use coalflow::geometry::{crosses, PolyTube, SampledPath, Trajectory};
use coalflow::noise::{replica_seed, stream_rng, sub_seed};
use coalflow::stats::{binomial_stderr, ks_distance_counts, ols_slope, tail_at_least};
use coalflow::walk1d::{
    killed_survivor_count, pair_meeting_times, red_blue_coupling, simulate_coalescing_bm, StepDistribution, WalkSpec,
};
use coalflow::{map_replicas, Result};
use rand::Rng;
use serde_json::json;
use statrs::function::erf::erf;

const SEED: u64 = 0x5eed_a11c;
const KNOWN_FAILING: &[usize] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn seed(criterion: u64) -> u64 {
    sub_seed(SEED, criterion)
}

fn lazy() -> coalflow::walk1d::StepSampler {
    StepDistribution::Lazy.sampler().unwrap()
}

fn config_path(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Killed walks on [-Kn, Kn]: the survivor tail stays under a constant over δk.
fn c1_coming_down_1d() -> Result<Outcome> {
    let text = std::fs::read_to_string(config_path("killed_tail.json"))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    assert_eq!((cfg.samples, cfg.n_values.as_deref()), (10_000, Some(&[32u64, 64, 128][..])));
    let out = run_experiment(&cfg)?;
    let r = &out.report;
    let delta = cfg.delta.unwrap();
    let c_hat = r.rows.iter().filter(|row| row[0] == 32.0).map(|row| row[1] * delta * row[2]).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for row in r.rows.iter().filter(|row| row[0] > 32.0 && row[1] >= 2.0) {
        worst = worst.max(row[2] / (c_hat / (delta * row[1])));
    }
    outcome(worst <= 1.25, format!("C = {c_hat:.4}, max tail / bound at n = 64, 128 is {worst:.3} (limit 1.25)"))
}

/// Exact P(τ > t) for two independent walks started `gap` apart.
fn dp_pair_tail(gap: i64, t: usize) -> f64 {
    let step = lazy();
    let mut diff = Vec::new();
    for (&u, &p) in step.values().iter().zip(step.probs()) {
        for (&v, &q) in step.values().iter().zip(step.probs()) {
            diff.push((u - v, p * q));
        }
    }
    let off = gap.abs() + 2 * t as i64 + 1;
    let mut mass = vec![0.0; (2 * off + 1) as usize];
    mass[(gap + off) as usize] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; mass.len()];
        for (i, &m) in mass.iter().enumerate() {
            for &(d, p) in &diff {
                let j = i as i64 + d;
                if m > 0.0 && j != off {
                    next[j as usize] += m * p;
                }
            }
        }
        mass = next;
    }
    mass.iter().sum()
}

/// Pair meeting tail: √t P(τ > t) / |x − y| is flat and nonincreasing in t.
fn c2_pair_tail() -> Result<Outcome> {
    let samples = 100_000u64;
    let ts = [16u64, 64, 256, 1024];
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, (x, y)) in [(0i64, 1i64), (0, 4)].into_iter().enumerate() {
        let taus = pair_meeting_times(x, y, 1024, samples, &lazy(), seed(2) + i as u64);
        let tail = |t: u64| taus.iter().filter(|tau| tau.map_or(true, |s| s > t)).count() as f64 / samples as f64;
        let gap = (y - x) as f64;
        let stat: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                let p = tail(t);
                let k = (t as f64).sqrt() / gap;
                (p * k, binomial_stderr(p, samples) * k)
            })
            .collect();
        let max = stat.iter().map(|s| s.0).fold(0.0, f64::max);
        let min = stat.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        let flat = max / min < 1.5;
        let nonincreasing = stat.windows(2).all(|w| w[1].0 <= w[0].0 + 3.0 * (w[0].1.powi(2) + w[1].1.powi(2)).sqrt());
        let (p4, exact) = (tail(4), dp_pair_tail(y - x, 4));
        let dp_ok = (p4 - exact).abs() <= 3.0 * binomial_stderr(exact, samples);
        pass &= flat && nonincreasing && dp_ok;
        detail.push(format!(
            "({x},{y}): stat {:?} ratio {:.3} nonincreasing {nonincreasing}; P(τ>4) {p4:.4} vs exact {exact:.4}",
            stat.iter().map(|s| format!("{:.3}", s.0)).collect::<Vec<_>>(),
            max / min
        ));
    }
    outcome(pass, detail.join("; "))
}

fn three_tubes() -> Vec<Tube> {
    vec![
        Tube::Box(PolyTube::rect(-0.75, 0.75, 0.25, 0.5).unwrap()),
        Tube::Box(PolyTube::rect(0.0, 1.5, 0.5, 0.75).unwrap()),
        Tube::Box(PolyTube::from_rects(&[(-1.5, -0.25, 0.0, 0.25), (-1.0, 0.25, 0.25, 0.5)]).unwrap()),
    ]
}

/// Adding starts never removes a crossing, replica by replica.
fn c3_monotone_in_n() -> Result<Outcome> {
    let model = Model::bm(1.0 / 256.0, 0.8, None)?;
    let xs = coalflow::estimate::dense_points(-1.5, 1.5, 40);
    let starts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 0.0]).collect();
    let r = n_ladder_study(&model, &starts, &three_tubes(), &[5, 10, 20, 40], 1000, seed(3))?;
    let p: Vec<String> = r.estimates.iter().map(|e| format!("{:.3}", e.p_hat)).collect();
    outcome(r.violations == 0 && r.monotone_flag, format!("{} indicator drops; joint p by n {p:?}", r.violations))
}

/// Relabelling the starts does not change the law of the crossing event.
fn c4_order_independence() -> Result<Outcome> {
    let model = Model::bm(1.0 / 512.0, 0.55, None)?;
    let tube = [Tube::Box(PolyTube::rect(-0.4, 0.4, 0.25, 0.5).unwrap())];
    let mut rng = stream_rng(seed(4), 0);
    let starts: Vec<Vec<f64>> =
        (0..20).map(|_| vec![rng.random_range(-1.0..1.0), (rng.random_range(0..=64) as f64) / 512.0]).collect();
    let reversed: Vec<Vec<f64>> = starts.iter().rev().cloned().collect();
    let a = estimate_joint_crossing(&model, Some(&starts), &tube, 20_000, sub_seed(seed(4), 1))?;
    let b = estimate_joint_crossing(&model, Some(&reversed), &tube, 20_000, sub_seed(seed(4), 2))?;
    let js = a.joint_stderr(&b);
    let d = (a.p_hat - b.p_hat).abs();
    outcome(d <= 3.0 * js, format!("p = {:.4}, p' = {:.4}, |diff| {d:.4} vs 3σ {:.4}", a.p_hat, b.p_hat, 3.0 * js))
}

/// Rescaled walks approach the Brownian reference as η shrinks.
///
/// Tube edges sit just inside sites of the finest lattice. A closed box then
/// absorbs the walk at the first site past its edge, whose overshoot beyond
/// the edge is 3h, h and 0 (h the finest spacing) along the ladder.
fn c5_invariance() -> Result<Outcome> {
    let h = 0.03125 * 2f64.sqrt();
    let e = 1e-6;
    let sets = [
        ("single", vec![Tube::Box(PolyTube::rect(-13.0 * h + e, 13.0 * h - e, 0.0, 0.25)?)]),
        (
            "pair",
            vec![
                Tube::Box(PolyTube::rect(-21.0 * h + e, -3.0 * h - e, 0.0, 0.1875)?),
                Tube::Box(PolyTube::rect(3.0 * h + e, 21.0 * h - e, 0.0, 0.1875)?),
            ],
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, (name, tubes)) in sets.iter().enumerate() {
        let r = eta_ladder_study(
            tubes,
            &[0.125, 0.0625, 0.03125],
            &StepDistribution::Lazy,
            1.0 / 512.0,
            None,
            20_000,
            sub_seed(seed(5), i as u64),
        )?;
        let gaps = r.gaps();
        let reference = r.reference.as_ref().expect("reference");
        let bound = 3.0 * r.estimates.last().unwrap().joint_stderr(reference);
        let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
        let close = gaps[gaps.len() - 1] <= bound;
        pass &= shrinking && close;
        detail.push(format!(
            "{name}: BM {:.4}, gaps {:?}, final bound {bound:.4}",
            reference.p_hat,
            gaps.iter().map(|g| format!("{g:.4}")).collect::<Vec<_>>()
        ));
    }
    outcome(pass, detail.join("; "))
}

/// Red and blue particles never merge while the red ones use the private noise.
fn c6_red_blue_window() -> Result<Outcome> {
    let spec = WalkSpec::new(0.0625, StepDistribution::Lazy, 1.5)?;
    let rows = map_replicas(1000, |r| {
        let rb = red_blue_coupling(&spec, 0.0, 0.5, 0.25, 1.0, replica_seed(seed(6), r)).unwrap();
        let (lo, hi) = rb.window;
        let inside = rb.cross_merges.iter().filter(|m| m.time >= lo && m.time < hi).count();
        (inside, rb.cross_merges.len() - inside)
    });
    let inside: usize = rows.iter().map(|r| r.0).sum();
    let after: usize = rows.iter().map(|r| r.1).sum();
    outcome(inside == 0 && after > 0, format!("{inside} cross merges inside the window, {after} after it"))
}

/// Gasket cells of level `k` containing vertex `v`.
fn cells_containing(g: &GasketGraph, v: usize, k: i32) -> Vec<Triangle> {
    let n = g.level() as i32;
    let side = 1i64 << (n - k);
    let [a, b] = g.lattice(v);
    let (i, j) = (a.div_euclid(side), b.div_euclid(side));
    let limit = 1i64 << (g.extent() as i32 + k);
    [(i, j), (i - 1, j), (i, j - 1)]
        .into_iter()
        .filter(|&(i, j)| i >= 0 && j >= 0 && i + j < limit && i & j == 0)
        .map(|(i, j)| Triangle::new(k, [i, j]))
        .filter(|t| t.contains_vertex(g, v))
        .collect()
}

/// Vertex and degree counts, and walks leave every cell through its apices.
fn c7_gasket_geometry() -> Result<Outcome> {
    let mut formulas = true;
    for n in 0..=3u32 {
        let g = build_gasket(n, 0)?;
        let expected = 3 * (3usize.pow(n) + 1) / 2;
        let degrees_ok = (0..g.len()).all(|v| g.degree(v) == 4 || g.degree(v) == 2)
            && (0..g.len()).filter(|&v| g.degree(v) == 2).count() == 3;
        let edges_ok = g.edges().iter().all(|&[u, w]| {
            let (p, q) = (g.position(u), g.position(w));
            ((p[0] - q[0]).hypot(p[1] - q[1]) - 2f64.powi(-(n as i32))).abs() < 1e-12
        });
        formulas &= g.len() == expected && degrees_ok && edges_ok;
    }
    let g = build_gasket(4, 1)?;
    let violations: usize = map_replicas(10_000, |r| {
        let s = replica_seed(seed(7), r);
        let start = g.coords(coalflow::noise::index_below(s, g.len()));
        let path = gasket_walk(&g, start, 200, s).unwrap();
        let vs: Vec<usize> = (0..path.len()).map(|k| g.vertex_at(path.sample(k)).unwrap()).collect();
        let mut bad = 0;
        for w in vs.windows(2) {
            for k in 0..g.level() as i32 {
                for cell in cells_containing(&g, w[0], k) {
                    if !cell.contains_vertex(&g, w[1]) && !cell.is_apex(&g, w[0]) {
                        bad += 1;
                    }
                }
            }
        }
        bad
    })
    .into_iter()
    .sum();
    outcome(formulas && violations == 0, format!("formulas at n = 0..3: {formulas}; {violations} non-apex exits in 10^4 paths"))
}

/// MSD grows like t^(2/d_w), and scaling space by 2 matches time by 5.
fn c8_walk_dimension() -> Result<Outcome> {
    let g = build_gasket(6, 2)?;
    let origin = g.vertex([0, 0]).expect("corner");
    let slope_steps = [25u64, 125, 625, 3125];
    let base = [100u64, 180, 320, 560, 1000];
    let mut steps: Vec<u64> = slope_steps.to_vec();
    steps.extend(base.iter().flat_map(|&t| [t, 5 * t]));
    let msd = mean_squared_displacement(&g, origin, &steps, 10_000, seed(8));
    let dt = g.time_step();
    let (x, y): (Vec<f64>, Vec<f64>) =
        slope_steps.iter().zip(&msd).map(|(&s, &m)| ((s as f64 * dt).ln(), m.ln())).unzip();
    let slope = ols_slope(&x, &y);
    let target = 2.0 * 2f64.ln() / 5f64.ln();
    let dev = msd[slope_steps.len()..]
        .chunks(2)
        .map(|c| (c[1] - 4.0 * c[0]).abs() / (4.0 * c[0]))
        .fold(0.0, f64::max);
    outcome(
        (slope - target).abs() <= 0.05 && dev < 0.05,
        format!("slope {slope:.4} vs {target:.4}; sup |MSD(5t) - 4 MSD(t)| / 4 MSD(t) = {dev:.4}"),
    )
}

/// Close pairs coalesce within time 5^-k with probability bounded below.
fn c9_pair_coalescence() -> Result<Outcome> {
    let n = 6u32;
    let g = build_gasket(n, 0)?;
    let mut rng = stream_rng(seed(9), 0);
    let mut mins = Vec::new();
    for k in 1..=3i32 {
        let radius = 2f64.powi(-k);
        let max_steps = 5u64.pow(n - k as u32) - 1;
        let mut min_p = f64::INFINITY;
        for pair in 0..20u64 {
            let x = rng.random_range(0..g.len());
            let px = g.position(x);
            let near: Vec<usize> = (0..g.len())
                .filter(|&v| {
                    let p = g.position(v);
                    v != x && (p[0] - px[0]).hypot(p[1] - px[1]) <= radius + 1e-12
                })
                .collect();
            let y = near[rng.random_range(0..near.len())];
            let s = sub_seed(seed(9), (k as u64) << 8 | pair);
            let hits = map_replicas(1000, |r| coalescence_time(&g, &[x, y], max_steps, replica_seed(s, r)).is_some())
                .into_iter()
                .filter(|&h| h)
                .count();
            min_p = min_p.min(hits as f64 / 1000.0);
        }
        mins.push(min_p);
    }
    let c_hat = mins.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(c_hat > 0.0, format!("c = {c_hat:.3}; smallest probability per k = 1, 2, 3: {mins:?}"))
}

/// Survivor counts in the unit cell agree across levels and have thin tails.
fn c10_coming_down_gasket() -> Result<Outcome> {
    let delta = 0.1;
    let region = [Triangle::new(0, [0, 0])];
    let counts: Vec<Vec<u64>> = [6u32, 7]
        .iter()
        .map(|&n| {
            let g = build_gasket(n, 1).unwrap();
            map_replicas(10_000, |r| survivor_count_gasket(&g, &region, delta, replica_seed(seed(10), r)).unwrap() as u64)
        })
        .collect();
    let ks = ks_distance_counts(&counts[0], &counts[1]);
    let tail = tail_at_least(&counts[1]);
    let gt = |k: usize| tail.get(k + 1).copied().unwrap_or(0.0);
    let tails = [gt(3), gt(9), gt(27)];
    let geometric = tails[0] < 1.0 && tails.windows(2).all(|w| w[1] <= w[0] / 3.0);
    outcome(
        ks <= 0.1 && geometric,
        format!("KS(n = 6, 7) = {ks:.4}; P(N > 3, 9, 27) at n = 7: {tails:.4?}"),
    )
}

/// Law of the number of occupied sites of {-1, 0, 1} after `steps` lazy
/// steps with killing outside, by enumerating every joint move.
fn three_site_law(steps: usize) -> [f64; 4] {
    let moves = [(-1i64, 0.25), (0, 0.5), (1, 0.25)];
    let mut dist = [0.0f64; 8];
    dist[0b111] = 1.0;
    for _ in 0..steps {
        let mut out = [0.0f64; 8];
        for (mask, &p) in dist.iter().enumerate().filter(|(_, &p)| p > 0.0) {
            let mut partial = vec![(0usize, p)];
            for s in (0..3).filter(|b| mask >> b & 1 == 1).map(|b| b as i64 - 1) {
                partial = partial
                    .iter()
                    .flat_map(|&(m, q)| {
                        moves.iter().map(move |&(d, pd)| {
                            let y = s + d;
                            (if y.abs() <= 1 { m | 1 << (y + 1) } else { m }, q * pd)
                        })
                    })
                    .collect();
            }
            for (m, q) in partial {
                out[m] += q;
            }
        }
        dist = out;
    }
    let mut law = [0.0; 4];
    for (mask, p) in dist.iter().enumerate() {
        law[(mask as u32).count_ones() as usize] += p;
    }
    law
}

/// Whether a path stays in the closed union of rectangles on [t0, t1] and
/// enters and leaves through the faces, checked on a fine time grid.
fn sampled_crossing(path: &SampledPath, rects: &[(f64, f64, f64, f64)], points: usize) -> bool {
    let t0 = rects.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let t1 = rects.iter().map(|r| r.3).fold(f64::NEG_INFINITY, f64::max);
    let inside = |x: f64, t: f64| rects.iter().any(|r| r.0 <= x && x <= r.1 && r.2 <= t && t <= r.3);
    let on_face = |x: f64, t: f64| rects.iter().any(|r| r.2 == t && r.0 <= x && x <= r.1);
    let on_top = |x: f64, t: f64| rects.iter().any(|r| r.3 == t && r.0 <= x && x <= r.1);
    path.start_time() <= t0
        && on_face(path.eval1(t0), t0)
        && on_top(path.eval1(t1), t1)
        && (0..=points).all(|i| {
            let t = if i == points { t1 } else { t0 + (t1 - t0) * i as f64 / points as f64 };
            inside(path.eval1(t), t)
        })
}

/// Replay determinism and the exact and distributional oracles.
fn c11_determinism_and_oracles() -> Result<Outcome> {
    let mut checks = Vec::new();

    let cfg = ExperimentConfig::from_json(
        &json!({
            "model": "walk1d", "study": "n_ladder", "samples": 400, "seed": 11,
            "eta": 0.125, "horizon": 1.2, "n_values": [2, 4, 6],
            "tubes": [{"dim": 1, "pieces": [{"lo": [-0.5, 0.25], "hi": [0.5, 1.0]}], "t0": 0.25, "t1": 1.0}]
        })
        .to_string(),
    )?;
    let strip = |mut r: Report| {
        r.wall_time = 0.0;
        r.to_json().unwrap()
    };
    let (a, b) = (run_experiment(&cfg)?, run_experiment(&cfg)?);
    checks.push(("replay", strip(a.report) == strip(b.report) && a.raw == b.raw));

    let samples = 100_000u64;
    let taus = pair_meeting_times(0, 1, 4, samples, &lazy(), seed(11));
    let p4 = taus.iter().filter(|t| t.is_none()).count() as f64 / samples as f64;
    let exact = dp_pair_tail(1, 4);
    checks.push(("difference-chain DP", (p4 - exact).abs() <= 3.0 * binomial_stderr(exact, samples)));

    let bm_samples = 4000u64;
    let taus: Vec<f64> = map_replicas(bm_samples, |r| {
        let sys = simulate_coalescing_bm(&[[0.0, 0.0], [1.0, 0.0]], 1e-3, 2.0, replica_seed(seed(11), r)).unwrap();
        sys.merges()[1].tau
    });
    let reflection = [0.25f64, 1.0].iter().all(|&t| {
        let exact = erf(1.0 / (2.0 * t.sqrt()));
        let p = taus.iter().filter(|&&tau| tau > t).count() as f64 / bm_samples as f64;
        (p - exact).abs() <= 3.0 * binomial_stderr(exact, bm_samples) + 1e-3
    });
    checks.push(("reflection formula", reflection));

    let chain_samples = 40_000u64;
    let three = [2usize, 3].iter().all(|&steps| {
        let law = three_site_law(steps);
        let mut counts = [0u64; 4];
        for r in 0..chain_samples {
            counts[killed_survivor_count(1.0, 1, steps as f64, &lazy(), replica_seed(seed(11), r)).unwrap().u] += 1;
        }
        (0..4).all(|u| {
            let p = counts[u] as f64 / chain_samples as f64;
            (p - law[u]).abs() <= 3.0 * binomial_stderr(law[u], chain_samples) + 1e-9
        })
    });
    checks.push(("3-particle enumeration", three));

    let mut rng = stream_rng(seed(11), 1);
    let mut disagree = 0;
    for _ in 0..2000 {
        let xs: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
        let path = SampledPath::from_1d((0..9).map(|k| k as f64 * 0.25).collect(), xs).unwrap();
        let (a, b) = (rng.random_range(-1.0..0.0), rng.random_range(0.0..1.0));
        let (c, d) = (rng.random_range(-1.0..0.0), rng.random_range(0.0..1.0));
        let rects = [(a, b, 0.3, 1.1), (c, d, 1.1, 1.7)];
        let tube = PolyTube::from_rects(&rects).unwrap();
        if crosses(&path, &tube, 0.0) != sampled_crossing(&path, &rects, 200_000) {
            disagree += 1;
        }
    }
    checks.push(("segment clipping vs dense sampling", disagree == 0));

    let pass = checks.iter().all(|c| c.1);
    let detail = checks.iter().map(|(n, ok)| format!("{n}: {}", if *ok { "ok" } else { "FAILED" })).collect::<Vec<_>>();
    outcome(pass, detail.join(", "))
}

fn main() {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(usize, &str, fn() -> Result<Outcome>); 11] = [
        (1, "coming down from infinity, 1d", c1_coming_down_1d),
        (2, "pair meeting tail", c2_pair_tail),
        (3, "monotonicity in n", c3_monotone_in_n),
        (4, "order independence", c4_order_independence),
        (5, "invariance principle, 1d", c5_invariance),
        (6, "red/blue window", c6_red_blue_window),
        (7, "gasket geometry", c7_gasket_geometry),
        (8, "walk dimension", c8_walk_dimension),
        (9, "pair coalescence on the gasket", c9_pair_coalescence),
        (10, "coming down on the gasket", c10_coming_down_gasket),
        (11, "determinism and oracles", c11_determinism_and_oracles),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let started = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let note = if !pass && KNOWN_FAILING.contains(&id) { " (known failure)" } else { "" };
        println!(
            "criterion {id:>2} {}: {name}{note} [{:.1}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
        if !pass && !KNOWN_FAILING.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
