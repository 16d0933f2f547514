use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("arity mismatch: expected {expected} interpolation conditions, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("domain mismatch: ({0}, {1}) vs ({2}, {3})")]
    DomainMismatch(f64, f64, f64, f64),

    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("point {x} lies outside the domain ({a}, {b})")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The stored representation cannot decide the question, e.g. Cantor
    /// parts whose supports overlap without being aligned.
    #[error("undecidable: {0}")]
    Undecidable(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
