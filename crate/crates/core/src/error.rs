use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("modulus must be odd and positive, got {0}")]
    InvalidModulus(u64),

    #[error("working dimension must be a positive multiple of 3, got {0}")]
    BadDimension(usize),

    #[error("element {value} out of range [0, {bound})")]
    OutOfRange { value: u64, bound: u64 },

    #[error("duplicate element {0}")]
    DuplicateElement(u64),

    #[error("element {value} exceeds embedding bound {bound} for modulus {modulus}")]
    EmbeddingBound {
        value: u64,
        bound: u64,
        modulus: u64,
    },

    #[error("set contains a three-term arithmetic progression: {0}, {1}, {2}")]
    NotApFree(u64, u64, u64),

    #[error("{what} = {value} exceeds the supported limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("input is not a tri-colored sum-free set: {0}")]
    InvalidSet(String),

    #[error("verification failed in trial {trial}: {detail}")]
    VerificationFailed { trial: u64, detail: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
