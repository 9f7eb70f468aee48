use thiserror::Error;

/// Errors raised by validation and by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the exponential sum has no terms")]
    EmptySum,

    #[error("duplicate exponent {0}")]
    DuplicateExponent(f64),

    #[error("term {label} has a zero coefficient")]
    ZeroCoefficient { label: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("coordinate dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinates of term {label} do not reproduce its exponent")]
    CoordsInconsistent { label: usize },

    #[error("declared independence contradicted by exact relation {certificate:?}")]
    IndependenceContradicted { certificate: Vec<String> },

    #[error("term {index} has a zero coordinate vector but nonzero exponent")]
    ZeroVectorForNonzeroExponent { index: usize },

    #[error("invalid strip ({alpha}, {beta})")]
    InvalidStrip { alpha: f64, beta: f64 },

    #[error("invalid tail bound: {0}")]
    InvalidTail(String),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),

    #[error("term index {index} out of range for a sum of {len} terms")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("overflow evaluating at sigma = {sigma}")]
    Overflow { sigma: f64 },

    #[error("ambiguous boundary at sigma = {sigma}: terms {indices:?} are all within the margin of equality")]
    AmbiguousBoundary { sigma: f64, indices: Vec<usize> },

    #[error("boundary clearance could not be obtained for the rectangle")]
    ClearanceFailed,

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
