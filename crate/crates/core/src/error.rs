use alloc::string::String;

/// Errors raised by the core computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid dimension d = {d} (need 2 <= d <= {max})")]
    InvalidDimension { d: usize, max: usize },

    #[error("operator is not flagged Hermitian")]
    NotHermitian,

    #[error("operator entries violate Hermitian symmetry by {0:e}")]
    HermitianViolation(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude or entry")]
    NonFinite,

    #[error("outcome {outcome} out of range for d = {d}")]
    OutcomeOutOfRange { outcome: usize, d: usize },

    #[error("degenerate angle: sin^2 denominator {denominator:e} below guard")]
    DegenerateAngle { denominator: f64 },

    #[error("expectation has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("exhaustive oracle limited to d <= {cap}, got d = {d}")]
    OracleCap { d: usize, cap: usize },

    #[error("setting vector is not a unit vector (norm {0})")]
    NotUnitVector(f64),

    #[error("box outcomes are not +1/-1 (d = {0})")]
    NotPlusMinusOne(usize),

    #[error("setting index {0} is not 1 or 2")]
    InvalidSetting(u8),

    #[error("trials per setting pair must be >= 1")]
    NoTrials,
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
