//! Exact scalars and exact dense linear algebra over Q and Q(i).
//!
//! Scalars serialize as `p/q` (the `/q` omitted when `q = 1`) and Gaussian
//! rationals as `re+imi` with either part omissible, e.g. `1/2-3/4i`, `5`,
//! `-2i`. Every file format in the crate uses this grammar.

mod elim;
mod gaussian;
mod gram;
mod matrix;
mod rational;

pub use elim::{column_basis, inverse, kernel_basis, kernel_matrix, pivot_columns, rank, rref};
pub use gaussian::GaussianRational;
pub use gram::{adjoint_wrt, ldlt, HermitianGram};
pub use matrix::ExactMatrix;
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{op}: shapes {left:?} and {right:?} do not conform")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a square matrix, got {shape:?}")]
    NotSquare { shape: (usize, usize) },
    #[error("matrix is not conjugate-symmetric at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("matrix is not positive definite: pivot {index} is {pivot}")]
    NotPositiveDefinite { index: usize, pivot: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed scalar {input:?}")]
pub struct ParseScalarError {
    pub input: String,
}

impl ParseScalarError {
    pub(crate) fn new(input: &str) -> Self {
        ParseScalarError { input: input.to_string() }
    }
}
