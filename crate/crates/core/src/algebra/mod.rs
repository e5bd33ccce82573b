//! Exact scalars and square matrices over the rationals or a prime field.

mod field;
mod matrix;
mod nullspace;

pub use field::{is_canonical, is_prime_u64, FieldElement, FieldSpec};
pub use matrix::SquareMatrix;
pub use nullspace::{rank, solve_nullspace, RowEchelon};
