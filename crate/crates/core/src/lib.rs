//! Numerical toolkit for the spectral statistics shared by two ensembles:
//! zeros of the Gaussian power series that arises as the degree limit of
//! random polynomials with iid coefficients, and eigenvalues of truncated
//! Haar-orthogonal matrices.
//!
//! The crate provides three independent analytic routes to the same
//! correlation functions (a Pfaffian kernel route, a Gaussian-integral
//! route for real points, and a Hafnian route for complex points),
//! Monte Carlo samplers for both ensembles, and the histogram/comparison
//! machinery used to cross-validate everything.
//!
//! All numerical code is generic over the floating-point scalar through
//! [`Real`]; the aliases below fix the common double-precision choice.

pub mod classical;
pub mod ensembles;
pub mod kernels;
pub mod linalg;
pub mod quad;
pub mod scalar;
pub mod special;
pub mod stats;

pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Dense real matrix at double precision.
pub type Mat64 = linalg::Mat<f64>;
/// Dense complex matrix at double precision.
pub type CMat64 = linalg::Mat<C64>;
