use thiserror::Error;

/// Errors raised across the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("value {0} occurs more often than the spline order allows")]
    MultiplicityExceeded(f64),

    #[error("point at index {0} lies outside [0, 1]")]
    OutOfRange(usize),

    #[error("a knot sequence must start with the boundary pair (0, 1)")]
    BadBoundary,

    #[error("spline order must be at least 1")]
    InvalidOrder,

    #[error("level {level} is not available (valid range {min}..={max})")]
    LevelOutOfRange {
        level: usize,
        min: usize,
        max: usize,
    },

    #[error("x = {0} lies outside the spline domain")]
    DomainError(f64),

    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("fine partition is not a one-knot refinement of the coarse partition at index {0}")]
    PartitionMismatch(usize),

    #[error("quadrature with {nodes} nodes cannot integrate order-{order} Gram entries exactly")]
    QuadratureTooCoarse { nodes: usize, order: usize },

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("the Gram inverse has not been materialized")]
    InverseNotAvailable,

    #[error("decay fit needs at least 3 nonzero offsets, found {0}")]
    DegenerateFit(usize),

    #[error("index {index} outside {min}..={max}")]
    IndexOutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },

    #[error("interval ({0}, {1}) is empty")]
    EmptyInterval(f64, f64),

    #[error("{0} is not a point of the knot sequence")]
    NotAKnot(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
