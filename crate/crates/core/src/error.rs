use thiserror::Error;

/// Errors produced by the solvers, the linear algebra and the file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("binomial table built up to {n_max} cannot answer C({requested}, _)")]
    TableTooSmall { n_max: usize, requested: i64 },

    #[error("partitions have different weights ({left} vs {right})")]
    WeightMismatch { left: u32, right: u32 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular linear system (rank {rank} of {order})")]
    Singular { rank: usize, order: usize },

    #[error("operation requires exact-rational mode")]
    UnsupportedMode,

    #[error("polynomial has a non-real root {re} + {im}i")]
    NonRealRoots { re: f64, im: f64 },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("bad range: lo {lo} > hi {hi}")]
    BadRange { lo: i64, hi: i64 },

    #[error("cannot parse {value:?} as a {expected}")]
    Parse { value: String, expected: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
