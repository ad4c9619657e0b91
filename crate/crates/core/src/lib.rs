//! Simulation and estimation for coalescing stochastic flows described by
//! their tube crossings.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: space-time tubes built from boxes, sampled paths and the
//!   exact crossing predicate.
//! * [`coalesce`]: the ordered coalescing rule turning free paths into
//!   coalescing paths.
//! * [`walk1d`]: rescaled coalescing random walks on the integers, discretised
//!   coalescing Brownian motion, killed systems and the red/blue coupling.
//! * [`gasket`]: Sierpinski gasket graphs, walks on them and triangular tubes.
//! * [`estimate`]: Monte Carlo crossing probabilities and convergence ladders.
//! * [`experiment`]: JSON configuration, study orchestration and reports.

pub mod coalesce;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod gasket;
pub mod geometry;
pub mod noise;
pub mod stats;
pub mod walk1d;

pub use error::{Error, Result};

/// Evaluates `f` on replica indices `0..n`, in parallel when the `parallel`
/// feature is on. Output order follows the index, so results never depend
/// on scheduling.
pub fn map_replicas<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
