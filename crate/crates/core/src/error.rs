//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by simulation, analysis and I/O operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter violates its documented constraint.
    #[error("invalid parameter `{name}`: {constraint} (got {value})")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: String,
    },

    /// A level index lies outside the materialized window `[0, j_max]`.
    #[error("level {j} outside materialized window [0, {j_max}]")]
    OutOfWindow { j: u32, j_max: u32 },

    /// The requested operation needs a finer grid than provided.
    #[error("grid too coarse: need grid_bits >= {required}, got {got}")]
    Resolution { required: u32, got: u32 },

    /// An index is out of range for its container.
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// A regression or statistic was requested with too few samples.
    #[error("insufficient data: need at least {need}, got {got}")]
    InsufficientData { need: usize, got: usize },

    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// NaN fed to an operation that rejects it.
    #[error("NaN rejected: {0}")]
    NanInput(&'static str),

    /// Filesystem failure while writing an artifact.
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON serialization failure.
    #[error("serialization failure: {0}")]
    Json(#[from] serde_json::Error),
}
