//! Space-time exterior calculus over `(k, n)` signatures.

pub mod cli;
pub mod electromagnetism;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod multivector;
pub mod sampling;
pub mod scalar;
pub mod signatures;

pub use electromagnetism::{CurrentDensity, EMField, Scenario};
pub use error::{Error, Result};
pub use fields::{AnalyticField, Field, Polynomial, PolynomialField, Position};
pub use geometry::{Cell, Chain, Quadrature};
pub use multivector::{GradeSet, Multivector};
pub use scalar::{rational, Rational, Scalar};
pub use signatures::{IndexList, Signature, SignedList};
