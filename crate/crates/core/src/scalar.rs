//! Scalar abstractions shared by the geometric models and the integer normal forms.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};

/// A field of coefficients for affine and Heisenberg models.
///
/// The exact instances (`BigRational`, `Ratio<i64>`) are what the engine uses;
/// the float instances exist so the same group laws can be evaluated
/// approximately, e.g. for plotting or quick numerical sanity checks.
pub trait Scalar: Clone + PartialEq + Debug + std::fmt::Display + Num + Neg<Output = Self> {
    fn from_int(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Whether equality on this type is exact.
    fn is_exact() -> bool;
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }
    fn is_exact() -> bool {
        false
    }
}

/// Euclidean integers usable as matrix entries for Smith normal form.
pub trait IntLike: Clone + PartialEq + Debug + std::fmt::Display + Integer + Signed + ToPrimitive {
    fn from_i64(v: i64) -> Self;
}

impl IntLike for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl IntLike for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl IntLike for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}
