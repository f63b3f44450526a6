//! Scalar rings the algebra is instantiated over.
//!
//! Two rings are supported: [`Rational`] for exact identity checking and
//! `f64` for fields, finite differences and quadrature.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    fn is_negative(&self) -> bool;

    /// Whether the ring is exact; finite-difference paths refuse exact rings.
    const EXACT: bool;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    const EXACT: bool = false;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    const EXACT: bool = true;
}

/// `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub(crate) fn sign_scalar<S: Scalar>(sign: i8) -> S {
    match sign {
        1 => S::one(),
        -1 => -S::one(),
        _ => S::zero(),
    }
}
