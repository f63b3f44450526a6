use thiserror::Error;

use crate::signatures::Signature;

/// Errors raised by the algebra, calculus and integration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signature ({k},{n}): need k+n in 1..={max}")]
    InvalidSignature { k: usize, n: usize, max: usize },

    #[error("index {index} out of range for a {dim}-dimensional space-time")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("index list {0:?} is not strictly increasing")]
    NonCanonicalIndices(Vec<usize>),

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },

    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },

    #[error("{op} requires {requirement}")]
    Domain {
        op: &'static str,
        requirement: &'static str,
    },

    #[error("position has {got} coordinates, signature needs {expected}")]
    PositionDimension { expected: usize, got: usize },

    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),

    #[error("{0} needs an exact (polynomial) field")]
    InexactField(&'static str),

    #[error("parameter point {0:?} lies outside the unit cube")]
    OutsideCube(Vec<f64>),

    #[error("tangent element is null (self-dot is zero); normal is undefined")]
    SingularElement,

    #[error("cell of dimension {dim} does not fit a {space}-dimensional space-time")]
    CellDimension { dim: usize, space: usize },

    #[error("quadrature order and subdivisions must be at least 1")]
    InvalidQuadrature,

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
