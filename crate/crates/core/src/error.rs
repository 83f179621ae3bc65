//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures raised by evaluators and verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    InvalidQ(f64),

    #[error("invalid truncation policy: {0}")]
    InvalidTruncation(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("singular value: {0}")]
    Singular(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("parameters outside the domain of validity: {0}")]
    Domain(String),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("zero argument not allowed: {0}")]
    ZeroArgument(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("argument too large for double precision summation: |z| = {0}")]
    ArgumentTooLarge(f64),

    #[error("denominator vanishes within tolerance: {0}")]
    NearZeroDenominator(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
