//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimension mismatch or non-positive dimensions.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// NaN/Inf where finite values are required, or out-of-range pixel data.
    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// Bad parameter combination (ordering, ranges, empty inputs).
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Diffusion step index outside the valid range.
    #[error("invalid step: {0}")]
    InvalidStep(String),

    /// Malformed file contents (magic bytes, headers, descriptors).
    #[error("format error: {0}")]
    Format(String),

    /// Payload shorter than the header promises.
    #[error("truncated payload: expected {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },

    /// Loss became non-finite during optimization.
    #[error("training diverged: {0}")]
    TrainingDiverged(String),

    /// Synthetic-corpus constraint could not be satisfied.
    #[error("generation failed: {0}")]
    Generation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
