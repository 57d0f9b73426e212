use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("orbit is zero-dimensional")]
    ZeroDimensionalOrbit,

    #[error("empty subspace")]
    EmptySubspace,

    #[error("no rows to report")]
    EmptyReport,

    #[error("unknown output format: {0}")]
    UnknownFormat(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
