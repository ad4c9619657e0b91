//! Space-time geometry: paths, tubes and the crossing predicate.
//!
//! Space is `R^d` (`d` = 1 for the line, 2 for the gasket); the last
//! coordinate of every space-time point is time.

mod clip;
mod hausdorff;
mod path;
mod tube;

pub use clip::{covers_unit_interval, crosses, crosses_shape, segment_box_interval, TubeShape};
pub use hausdorff::{hausdorff_distance, tube_distance, TubeDistance};
pub use path::{Point, SampledPath, Segment, Trajectory, MAX_DIM};
pub use tube::{superdense_family, Cuboid, PolyTube, TubeFile, TubePiece};

/// Default membership tolerance for crossing checks.
pub const DEFAULT_TOL: f64 = 1e-9;
