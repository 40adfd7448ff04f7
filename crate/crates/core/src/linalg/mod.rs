//! Dense numerical kernels: the Pfaffian and Hafnian evaluators the
//! correlation formulas are built from, plus the supporting factorizations
//! (LU, Cholesky, QR, Hessenberg/Francis eigenvalues) used throughout.

mod chol;
mod eig;
mod hafnian;
mod lu;
mod mat;
mod pfaffian;
mod qr;

pub use chol::{cholesky_hermitian, cholesky_real, hermitian_solve_mat, tri_det_sq, tri_solve_real};
pub use eig::eigenvalues;
pub use hafnian::{hafnian, hafnian_brute_force, SymMatrix, HAFNIAN_DIM_CAP};
pub use lu::{cond_1, det, inverse, solve, LuFactors};
pub use mat::Mat;
pub use pfaffian::{pfaffian, SkewMatrix};
pub use qr::qr_square;

use thiserror::Error;

/// Shared shape guard for the matchings-based evaluators: their matrices
/// must have positive even dimension.
pub(crate) fn check_positive_even(n: usize) -> Result<(), LinalgError> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(LinalgError::BadEvenDimension { dim: n });
    }
    Ok(())
}

/// Failures of the dense kernels. Diagnostic magnitudes are reported as
/// `f64` regardless of the working scalar.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix must be square; got {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operand shapes are incompatible: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension {dim} must be a positive even number")]
    BadEvenDimension { dim: usize },
    #[error("matrix is not antisymmetric: max |a_ij + a_ji| = {max_dev:e} exceeds {tol:e}")]
    NotSkewSymmetric { max_dev: f64, tol: f64 },
    #[error("matrix diagonal entry {index} is {value:e}, expected exactly zero")]
    NonZeroDiagonal { index: usize, value: f64 },
    #[error("matrix is not symmetric: max |a_ij - a_ji| = {max_dev:e} exceeds {tol:e}")]
    NotSymmetric { max_dev: f64, tol: f64 },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is singular to working precision (condition estimate {cond_estimate:e})")]
    Singular { cond_estimate: f64 },
    #[error("matrix is not positive definite (failure at pivot {pivot_index})")]
    NotPositiveDefinite { pivot_index: usize },
    #[error("dimension {dim} exceeds the supported cap {cap} for this operation")]
    DimensionCap { dim: usize, cap: usize },
    #[error("eigenvalue iteration failed to converge (index {eigen_index}, {iterations} iterations)")]
    NoConvergence {
        eigen_index: usize,
        iterations: usize,
    },
}
