use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps `SearchExhausted` to exit code 2 and `Hypothesis` to exit
/// code 3; everything else is treated as a usage error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("multiplication is not proven proper: {0}")]
    UnverifiedProper(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("search exhausted at stage {stage} (sup-norm bound {bound}): {constraint}")]
    SearchExhausted {
        stage: usize,
        bound: i64,
        constraint: String,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("fractional part straddles an integer at {bits} bits of precision")]
    Straddle { bits: u32 },

    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
