use thiserror::Error;

/// Errors raised by the exact-arithmetic pipeline.
///
/// Most variants signal a broken internal invariant rather than bad user
/// input; the CLI maps them to exit code 1.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cyclotomic context mismatch: h={left} vs h={right}")]
    ContextMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar is not rational: {0}")]
    NotRational(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integrability failure: {0}")]
    Integrability(String),
    #[error("recursion is not well founded: {0}")]
    WellFoundedness(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
