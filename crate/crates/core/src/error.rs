use thiserror::Error;

/// Errors surfaced by algebra construction and verification operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    /// A randomized separation draw failed repeatedly; carries the seed so
    /// the run can be reproduced.
    #[error("degenerate spectrum after {attempts} attempts (seed {seed:#x}): {context}")]
    DegenerateSpectrum {
        seed: u64,
        attempts: u32,
        context: String,
    },

    /// An exact-integer quantity (rank, block size, multiplicity) failed to
    /// round within tolerance.
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("internal limit exceeded: {0}")]
    InternalLimit(String),

    /// A structural fact that must hold mathematically failed numerically.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
