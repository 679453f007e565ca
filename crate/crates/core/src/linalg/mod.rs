//! Exact dense linear algebra over ℚ and GF(p).

mod field;
mod matrix;
mod span;
mod subspace;

pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;
pub use span::{Expression, SpanSolver, SparseVec};
pub use subspace::{quotient_basis, Quotient, Subspace};
