//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),

    #[error("values belong to different ring contexts")]
    CtxMismatch,

    #[error("ambient rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("p^e or a bracketed exponent does not fit machine arithmetic (p={p}, e={e})")]
    ExponentOverflow { p: u32, e: u32 },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("star-closure chain did not stabilize within {cap} iterations")]
    IterationCap { cap: usize },

    #[error("HSL chain for j={j} did not stabilize within e_max={e_max} steps")]
    StabilizationCapExceeded {
        j: usize,
        e_max: usize,
        /// Partial descending chain B_{j,0} .. B_{j,e_max}, for inspection.
        partial: Box<crate::fsing::HslReport>,
    },

    #[error("no test element found: all Jacobian minor candidates failed the (I : c) = I check")]
    NoTestElement,

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("dense oracle bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A mathematical identity the algorithms rely on failed to hold; this is
    /// a bug in the engine, never a property of the input.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
