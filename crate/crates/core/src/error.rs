use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot factor zero")]
    FactorZero,
    #[error("{value} has no square root modulo {prime}^{exponent}")]
    NoSquareRoot { value: String, prime: u64, exponent: u32 },
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("element {0} is not totally positive")]
    NotTotallyPositive(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("integer too large for this operation: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures that a retry at higher precision may cure.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision(_))
    }
}
