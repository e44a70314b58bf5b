use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("dimensions must be positive (N={n}, P={p})")]
    EmptyDims { n: usize, p: usize },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("not a probability vector: {0}")]
    NotOnSimplex(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("instance too large: {what} is {size}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("computation cancelled")]
    Cancelled,
}
