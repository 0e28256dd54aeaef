//! Exact dense linear algebra over ℚ and prime fields.

mod field;
mod matrix;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{Matrix, Subspace};
