//! Exact arithmetic: the scalar field, integer matrices and the linear
//! algebra kernels the rest of the crate relies on.

mod cone;
mod field;
mod linalg;
mod parse;
mod poly;
mod scalar;

use thiserror::Error;

pub use cone::cone_membership;
pub use field::{Field, Q};
pub use linalg::{
    det, inverse, kernel, mat_mul, rank, rref, smith_normal_form, solve_any, solve_in_span, to_scalar, transpose,
    IntMatrix, Smith,
};
pub use parse::parse_scalar;
pub use scalar::{Integrality, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    BadField(String),
    #[error("parameterized input where rational data is required")]
    ParameterizedInput,
    #[error("dimension mismatch")]
    Dimension,
}

/// Classifies a scalar against the integers.
pub fn integrality_probe(s: &Scalar) -> Integrality {
    s.integrality()
}
