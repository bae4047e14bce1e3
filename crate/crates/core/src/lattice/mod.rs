//! Exact integer linear algebra: dense matrices, Smith normal form,
//! cokernels and integer system solving.

mod abelian;
mod matrix;
mod smith;

pub use abelian::FinAbGroup;
pub use matrix::IntMatrix;
pub use smith::{
    cokernel, smith_normal_form, solve_integer, solve_integer_certified, IntegerSolution,
    SmithForm,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invariant factor {0} is not allowed (must be 0 or at least 2)")]
    BadFactor(String),
}
