//! Exact integer and rational algebra: matrices, Smith normal form, Gaussian rationals.

pub mod gauss;
pub mod linsolve;
pub mod matrix;
pub mod snf;

pub use gauss::Gauss;
pub use linsolve::{rank, solve_affine};
pub use matrix::Matrix;
pub use snf::{cokernel_of_rows, smith_normal_form, solve_fixed_lattice, Cokernel, Snf};
