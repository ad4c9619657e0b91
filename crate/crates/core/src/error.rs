use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate box: coordinate {axis} has lo {lo} >= hi {hi}")]
    DegenerateBox { axis: usize, lo: f64, hi: f64 },

    #[error("invalid tube: {0}")]
    InvalidTube(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("enlargement out of range: delta {delta} must lie in (0, {limit})")]
    EnlargementOutOfRange { delta: f64, limit: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("off-lattice start ({x}, {t})")]
    OffLattice { x: f64, t: f64 },

    #[error("invalid step distribution: {0}")]
    InvalidStep(String),

    #[error("vertex not in graph: {0}")]
    NotAVertex(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field: field.into(), reason: reason.into() }
    }
}
