//! The two classical analytic formulations of the correlation functions,
//! predating the Pfaffian kernel route and used to cross-validate it:
//!
//! * [`bleher_di_rho`]: real-point correlations as a Gaussian expectation
//!   over the joint distribution of the limiting process and its
//!   derivative (closed forms for one and two points, Monte Carlo above);
//! * [`prosen_rho`]: complex-point correlations as the Hafnian of a
//!   Schur-complement matrix built from a generating function.

mod bleher_di;
mod prosen;

pub use bleher_di::{
    bleher_di_rho, BleherDiEstimate, BleherDiOptions, DeltaMatrix, OmegaMatrix,
};
pub use prosen::{
    g_kac, prosen_rho, prosen_rho_with, Generator, GeneratorJet, KacGenerator, ProsenMatrices,
};

use thiserror::Error;

use crate::linalg::LinalgError;

/// Real points handed to the Gaussian-expectation route must keep this
/// distance from the singular endpoints at +-1.
pub const REAL_POINT_MARGIN: f64 = 1e-6;

/// Modulus bound for generator arguments; `g` has its singularity at 1.
pub const GENERATOR_MARGIN: f64 = 1e-12;

/// Condition-number limit on the Hafnian route's coefficient matrix,
/// beyond which points are reported as effectively coincident.
pub const CONDITION_LIMIT: f64 = 1e10;

/// Failures of the classical evaluators. Diagnostic magnitudes are
/// reported as `f64` regardless of the working scalar.
#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("point list must contain at least one point")]
    EmptyPointList,
    #[error("non-finite coordinate at point {index}")]
    NonFinitePoint { index: usize },
    #[error(
        "point {index} (modulus {modulus}) must lie strictly inside the domain \
         with margin {margin:e}"
    )]
    PointOutOfDomain {
        index: usize,
        modulus: f64,
        margin: f64,
    },
    #[error("points {i} and {j} coincide (conjugates included)")]
    CoincidentPoints { i: usize, j: usize },
    #[error("{what} is not positive definite; points are degenerate or too close together")]
    NotPositiveDefinite { what: &'static str },
    #[error("generator argument modulus {modulus} is within {margin:e} of the singularity")]
    GeneratorSingularity { modulus: f64, margin: f64 },
    #[error(
        "coefficient matrix condition number {cond:e} exceeds {limit:e}; \
         points are nearly coincident"
    )]
    NearCoincident { cond: f64, limit: f64 },
    #[error("Monte Carlo draw budget must be at least 2, got {draws}")]
    BadDrawBudget { draws: u64 },
    #[error(
        "Monte Carlo relative error {achieved:e} exceeds target {target:e} \
         (value {value:e}, std error {std_error:e})"
    )]
    ToleranceNotMet {
        value: f64,
        std_error: f64,
        achieved: f64,
        target: f64,
    },
    #[error("imaginary residue {residual:e} exceeds {tol:e}")]
    ImaginaryResidue { residual: f64, tol: f64 },
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
}
