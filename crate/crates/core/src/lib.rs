//! Exact-arithmetic engine for circle-fibred nilBott towers.
//!
//! Towers are built as iterated group extensions `1 -> Z -> pi_i -> pi_{i-1} -> 1`
//! over polycyclic presentations; twisted second cohomology of the two
//! 2-dimensional bases is computed with Fox calculus and Smith normal form;
//! every 3-dimensional tower is realized by explicit flat-affine or
//! Heisenberg-affine generators and classified.
//!
//! The math is scalar-generic; the aliases below fix the exact instances
//! the engine uses throughout.

pub mod algebra;
pub mod catalogue;
pub mod check;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod geometry;
mod int_serde;
pub mod invariants;
pub mod polycyclic;
pub mod scalar;
pub mod towers;
pub mod words;

pub use error::{Error, Result};
pub use scalar::{IntLike, Scalar};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Reduced fraction of [`Int`]s with positive denominator.
pub type Rat = num_rational::BigRational;
/// Gaussian rational `re + im·i`.
pub type GaussRat = algebra::Gauss<Rat>;
/// Integer matrix.
pub type IntMatrix = algebra::Matrix<Int>;
