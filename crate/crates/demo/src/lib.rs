//! Browser bindings. Every export returns a JSON string; errors come back as
//! `{"error": "..."}` so the page never has to catch.

use coalflow::estimate::{estimate_joint_crossing, Model, Tube};
use coalflow::gasket::{build_gasket_capped, gasket_walk};
use coalflow::geometry::PolyTube;
use coalflow::walk1d::{simulate_coalescing_walks, StepDistribution, WalkSpec};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

// Keeps the page responsive.
const MAX_GASKET_TRIANGLES: u64 = 3u64.pow(8);

fn wrap(r: coalflow::Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Coalescing walks started from every lattice site in `[-width, width]` at
/// time 0. Returns the drawn branches and the merge times.
#[wasm_bindgen]
pub fn coalescing_paths(eta: f64, width: f64, horizon: f64, seed: u64) -> String {
    wrap((|| {
        let spec = WalkSpec::new(eta, StepDistribution::Lazy, horizon)?;
        let h = spec.space_step();
        let k = (width / h).floor() as i64;
        if k > 2000 {
            return Err(coalflow::Error::param("width", "too many starting sites for the demo"));
        }
        let starts: Vec<[f64; 2]> = (-k..=k).map(|i| [i as f64 * h, 0.0]).collect();
        let sys = simulate_coalescing_walks(&spec, &starts, seed)?;
        let paths: Vec<Value> = (0..sys.len())
            .map(|j| {
                let b = sys.branch(j);
                json!({ "t": b.times(), "x": b.positions() })
            })
            .collect();
        let tau: Vec<Option<f64>> = sys.merges().iter().map(|m| m.is_merged().then_some(m.tau)).collect();
        Ok(json!({ "paths": paths, "tau": tau, "survivors": sys.distinct_at(horizon).count() }))
    })())
}

/// Vertices and edges of the gasket graph plus one random walk from the
/// origin corner.
#[wasm_bindgen]
pub fn gasket_with_walk(n: u32, m: u32, steps: u32, seed: u64) -> String {
    wrap((|| {
        let g = build_gasket_capped(n, m, MAX_GASKET_TRIANGLES)?;
        let vertices: Vec<[f64; 2]> = (0..g.len()).map(|v| g.position(v)).collect();
        let walk = gasket_walk(&g, [0, 0], steps as u64, seed)?;
        let pts: Vec<&[f64]> = (0..walk.len()).map(|k| walk.sample(k)).collect();
        Ok(json!({ "vertices": vertices, "edges": g.edges(), "walk": pts, "time_step": g.time_step() }))
    })())
}

/// Monte Carlo probability that the rescaled coalescing walks cross the
/// rectangle `[x_lo, x_hi] × [t0, t1]`.
#[wasm_bindgen]
pub fn crossing_probability(eta: f64, x_lo: f64, x_hi: f64, t0: f64, t1: f64, samples: u32, seed: u64) -> String {
    wrap((|| {
        let tube = Tube::Box(PolyTube::rect(x_lo, x_hi, t0, t1)?);
        let spec = WalkSpec::new(eta, StepDistribution::Lazy, t1 + eta * eta)?;
        let est = estimate_joint_crossing(&Model::Walk1d(spec), None, &[tube], samples as u64, seed)?;
        Ok(json!({ "p_hat": est.p_hat, "stderr": est.stderr, "ci": [est.ci.0, est.ci.1], "samples": est.samples }))
    })())
}
