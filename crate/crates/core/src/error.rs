use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a normalized eigenform: {0}")]
    NotEigenform(String),
    #[error("resource refusal: {what} needs {demand}, budget is {budget}")]
    Resource { what: String, demand: u64, budget: u64 },
    #[error("prime {0} is ramified in the representation")]
    Ramified(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("hypothesis H2 violated at q = {0} (q^2 | N and q | pm)")]
    H2Violation(u64),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("functional equation inconsistent: solved w = {0}")]
    FunctionalEquation(String),
    #[error("insufficient coefficients: have {have}, need {need}")]
    InsufficientCoefficients { have: usize, need: usize },
    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),
    #[error("hypothesis H1 failed: L(f,2) is numerically zero")]
    H1Failure,
    #[error("prime {0} is not ordinary for this form")]
    NonOrdinary(u64),
    #[error("division by a p-adic zero")]
    PadicZeroDivision,
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
