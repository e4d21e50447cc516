//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by table, quantum, and solver operations.
///
/// Numeric payloads are reported as `f64` regardless of the working scalar.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{name}` value {value} out of range {range}")]
    ValueOutOfRange {
        name: String,
        value: usize,
        range: usize,
    },

    #[error("outcome sets differ in size: {0} vs {1}")]
    OutcomeMismatch(usize, usize),

    #[error("variable ranges differ: {0} vs {1}")]
    RangeMismatch(usize, usize),

    #[error("conditioning event {0} has zero probability, conditional undefined")]
    ZeroProbabilityConditioning(String),

    #[error("probability vector has mass {0}, expected 1")]
    NotNormalized(f64),

    #[error("negative probability {0} at index {1}")]
    NegativeProbability(f64, usize),

    #[error("table shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("conditional tables are defined on different supports: {0}")]
    SupportMismatch(String),

    #[error("missing cell for conditioning tuple {0:?}")]
    MissingCell(Vec<usize>),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("state has squared norm {0}, expected 1")]
    StateNotNormalized(f64),

    #[error("operator is not Hermitian: max asymmetry {0}")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite: min eigenvalue {0}")]
    NotPositiveSemidefinite(f64),

    #[error("POVM elements sum to identity only within {0}, tolerance exceeded")]
    PovmIncomplete(f64),

    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("vector is not unit length: norm {0}")]
    NotUnitVector(f64),

    #[error("setting count {0} too large for enumeration (max {1})")]
    EnumerationTooLarge(usize, usize),

    #[error("linear program failed: {0} (residual {1})")]
    SolverFailure(String, f64),

    #[error("measurement set is not tomographically complete (rank {0} of {1})")]
    NotTomographicallyComplete(usize, usize),

    #[error("requested dense representation needs dimension {needed}, limit {limit}")]
    DimensionOverflow { needed: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
