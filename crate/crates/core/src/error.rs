use thiserror::Error;

/// Errors produced by the decomposition routines and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    /// The input matrix violates a structural requirement (empty, non-finite, asymmetric).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter is out of range or inconsistent with the input shape.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("target rank {requested} exceeds numerical rank {achieved}")]
    RankDeficient { requested: usize, achieved: usize },

    /// A routine that theory guarantees to succeed did not (signals roundoff trouble).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the filesystem rather than by the caller's arguments.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
