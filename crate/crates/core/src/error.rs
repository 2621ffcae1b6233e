use thiserror::Error;

/// Errors raised by the decoding toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("generator matrix is not full rank (rank {rank}, expected {k})")]
    RankDeficient { rank: usize, k: usize },

    #[error("generator column {0} is all-zero")]
    ZeroColumn(usize),

    #[error("matrix parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown code name `{0}`")]
    UnknownCode(String),

    #[error("enumeration bound exceeded: {what} = {size} (limit {limit})")]
    EnumerationBound {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// An internal consistency check of the symbolic derivation failed.
    #[error("derivation assertion failed: {0}")]
    Derivation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
