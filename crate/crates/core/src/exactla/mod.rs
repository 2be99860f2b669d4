//! Dense linear algebra over prime fields.

mod field;
mod matrix;
pub mod rref;
mod subspace;

pub use field::{is_prime, Field};
pub use matrix::Matrix;
pub use rref::{invert, left_kernel, rank, right_kernel, rref, solve, solve_left, Rref};
pub use subspace::{Quotient, Subspace};
