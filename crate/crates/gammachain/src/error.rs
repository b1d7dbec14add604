use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical or structural parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input value violates a precondition of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical procedure failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// A density matrix failed a positivity / trace check.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The ground state is degenerate and the requested quantity is
    /// basis-dependent.
    #[error("degenerate ground state: {0}")]
    Degenerate(String),

    /// A coupling set is not reducible to a uniform nearest-neighbor chain.
    #[error("not reducible: {0}")]
    NotReducible(String),

    /// An effective-mode denominator is too close to resonance.
    #[error("near resonance: {0}")]
    NearResonance(String),

    /// An exponent ratio is undefined (division by a near-zero slope).
    #[error("undefined exponent: {0}")]
    UndefinedExponent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
