use thiserror::Error;

/// Errors produced by the counting, oracle and bound routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field order {p}^{s} exceeds the cap of 2^20")]
    FieldTooLarge { p: u64, s: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element {value} is not in a field of order {q}")]
    NotAnElement { value: u64, q: u32 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("evaluation set contains duplicate element {0}")]
    DuplicatePoint(u32),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("enumeration budget exceeded: estimated {estimate} operations, limit {limit}")]
    BudgetExceeded { estimate: u128, limit: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("assembled count is not an integer: {0}")]
    NonIntegralCount(String),
}

pub type Result<T> = std::result::Result<T, Error>;
