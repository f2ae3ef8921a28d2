//! Error types shared across the crate.

use thiserror::Error;

/// Failures of the exact sequence calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(String),
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("value at index {0} is irrational; use bounded evaluation")]
    Irrational(u64),
    #[error("strand mixes reindexed bases with fractional exponents; sign pattern is not decidable here")]
    MixedRadicals,
    #[error("index computation overflowed 64 bits")]
    IndexOverflow,
    #[error("invalid sequence: {0}")]
    Invalid(String),
}

/// Failures of the operator model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error("operator `{0}` carries a finite block; exact spectral projections are unavailable (use the truncation lab)")]
    BlockNotSupported(String),
    #[error("block of size {block} does not fit a truncation of size {n}")]
    TruncationTooSmall { block: usize, n: usize },
    #[error("block matrix is not Hermitian")]
    NotHermitian,
    #[error("operator list is empty")]
    Empty,
}

/// Failures of the dense numeric engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("eigensolver did not converge within {0} iterations")]
    ConvergenceFailure(usize),
    #[error("eigenvalue {eigenvalue} lies within {tolerance} of interval endpoint {endpoint}")]
    AmbiguousBoundary {
        eigenvalue: f64,
        endpoint: f64,
        tolerance: f64,
    },
    #[error("input {0} is not an orthogonal projection")]
    NotAProjection(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("empty input")]
    Empty,
}

/// Failures of the decision procedures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("the epsilon-core is infinite dimensional; the inequality check needs a finite-rank projection")]
    InfiniteCore,
    #[error("witness strand exhausted: next index exceeds the budget {0}")]
    ExhaustedWitness(u64),
    #[error("no spectral gap above zero in the truncated projection sum")]
    NoSpectralGap,
    #[error("internal oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<SeqError> for CriteriaError {
    fn from(e: SeqError) -> Self {
        CriteriaError::Model(ModelError::Seq(e))
    }
}
