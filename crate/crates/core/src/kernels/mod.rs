//! Correlation kernels for the real/complex spectral point process.
//!
//! The process has a 2x2-block matrix kernel built from three scalar
//! kernels `S`, `D`, `Itilde` evaluated over every combination of real and
//! upper-half-disk complex arguments. Two constructions are provided:
//!
//! * **finite**: the explicit partial sums over the first `M/2` pairs of
//!   skew-orthogonal polynomials, matching an `M`-dimensional matrix
//!   truncation,
//! * **limiting**: the `M -> infinity` closed forms.
//!
//! Correlation functions of any order are Pfaffians of the assembled block
//! matrix ([`rho_pfaffian`]); low-order closed forms are provided for
//! cross-checks. All evaluators are pure and immutable after construction,
//! hence safe to share across threads.

mod finite;
mod inner;
mod limiting;
mod poly;
mod rho;
mod weights;

pub use inner::skew_inner_product;
pub use limiting::{
    limit_cross, limit_d, limit_i_cc, limit_i_rr, limit_i_rr_quadrature, limit_s_cc, limit_s_rr,
    CrossKernels,
};
pub use poly::{skew_poly, tau_even, tau_odd};
pub use rho::{rho1_complex_closed, rho1_real_closed, rho2_real_closed, rho_pfaffian, PointConfig};
pub use weights::{weight_w, weight_w_real};

use num_complex::Complex;
use thiserror::Error;

use crate::quad::QuadError;
use crate::scalar::Real;

/// Margin kept between any admissible point and the singular endpoints
/// `+1`/`-1` where the real density diverges.
pub const BOUNDARY_MARGIN: f64 = 1e-8;

/// Lower bound on `|1 - u v|`-type denominators in the limiting kernels.
pub const NEAR_SINGULAR_CUTOFF: f64 = 1e-12;

/// Relative antisymmetry tolerance for the assembled correlation matrix.
const ASSEMBLY_TOL: f64 = 1e-10;

/// Failures of kernel construction or evaluation. Diagnostic magnitudes
/// are reported as `f64` regardless of the working scalar.
#[derive(Debug, Error)]
pub enum KernelError {
    #[error("weight order L must be at least 1, got {l}")]
    BadOrder { l: u32 },
    #[error("truncation order M must be a positive even number, got {m}")]
    BadTruncation { m: usize },
    #[error("{what} must lie strictly inside the unit disk; got modulus {modulus}")]
    OutsideDisk { what: &'static str, modulus: f64 },
    #[error("complex point must have strictly positive imaginary part; got {im:e}")]
    NotUpperHalf { im: f64 },
    #[error("point is within {margin:e} of the singular endpoint +-1 (distance {distance:e})")]
    BoundaryProximity { distance: f64, margin: f64 },
    #[error("points {i} and {j} coincide")]
    CoincidentPoints { i: usize, j: usize },
    #[error("near-singular kernel denominator: |1 - u v| = {magnitude:e} below {cutoff:e}")]
    NearSingular { magnitude: f64, cutoff: f64 },
    #[error("non-finite point coordinate")]
    NonFinite,
    #[error(
        "quadrature did not meet tolerance: value {value:e}, achieved error estimate {achieved:e}"
    )]
    Quadrature { value: f64, achieved: f64 },
    #[error("internal consistency check failed: {what} residual {residual:e} exceeds {tol:e}")]
    Inconsistent {
        what: &'static str,
        residual: f64,
        tol: f64,
    },
}

impl KernelError {
    pub(crate) fn from_quad<R: Real>(err: QuadError<R>) -> Self {
        match err {
            QuadError::ToleranceNotMet { value, error, .. } => KernelError::Quadrature {
                value: value.to_f64().unwrap_or(f64::NAN),
                achieved: error.to_f64().unwrap_or(f64::NAN),
            },
            QuadError::NonFinite { at } => KernelError::Quadrature {
                value: f64::NAN,
                achieved: at.to_f64().unwrap_or(f64::NAN),
            },
        }
    }
}

/// Order parameter of the weight: the ensemble has an `(L+M) x (L+M)`
/// orthogonal matrix truncated to its `M x M` corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightParams {
    l: u32,
}

impl WeightParams {
    pub fn new(l: u32) -> Result<Self, KernelError> {
        if l < 1 {
            return Err(KernelError::BadOrder { l });
        }
        Ok(WeightParams { l })
    }

    pub fn l(&self) -> u32 {
        self.l
    }
}

/// Argument kind for a kernel evaluation: a real point in `(-1, 1)` or a
/// complex point in the open upper-half unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelArg<R: Real> {
    Real(R),
    Complex(Complex<R>),
}

impl<R: Real> KernelArg<R> {
    /// The point as a complex number regardless of kind.
    pub fn value(self) -> Complex<R> {
        match self {
            KernelArg::Real(x) => Complex::new(x, R::zero()),
            KernelArg::Complex(z) => z,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, KernelArg::Real(_))
    }

    /// Domain checks shared by every evaluator: finite, strictly inside
    /// the unit disk, away from the `+-1` endpoints, and (for the complex
    /// kind) strictly in the upper half plane.
    pub(crate) fn validate(self) -> Result<(), KernelError> {
        let margin = R::of(BOUNDARY_MARGIN);
        match self {
            KernelArg::Real(x) => {
                if !x.is_finite() {
                    return Err(KernelError::NonFinite);
                }
                let dist = R::one() - x.abs();
                if dist <= R::zero() {
                    return Err(KernelError::OutsideDisk {
                        what: "real point",
                        modulus: x.abs().to_f64().unwrap_or(f64::NAN),
                    });
                }
                if dist < margin {
                    return Err(KernelError::BoundaryProximity {
                        distance: dist.to_f64().unwrap_or(f64::NAN),
                        margin: BOUNDARY_MARGIN,
                    });
                }
            }
            KernelArg::Complex(z) => {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(KernelError::NonFinite);
                }
                if z.norm() >= R::one() {
                    return Err(KernelError::OutsideDisk {
                        what: "complex point",
                        modulus: z.norm().to_f64().unwrap_or(f64::NAN),
                    });
                }
                if z.im <= R::zero() {
                    return Err(KernelError::NotUpperHalf {
                        im: z.im.to_f64().unwrap_or(f64::NAN),
                    });
                }
                let one = Complex::new(R::one(), R::zero());
                let dist = (z - one).norm().min((z + one).norm());
                if dist < margin {
                    return Err(KernelError::BoundaryProximity {
                        distance: dist.to_f64().unwrap_or(f64::NAN),
                        margin: BOUNDARY_MARGIN,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Truncation mode of a [`KernelSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMode {
    /// Partial sums over the first `m/2` polynomial pairs.
    Finite { m: usize },
    /// The closed-form `M -> infinity` kernels.
    Limiting,
}

/// The three scalar kernels at a fixed order and truncation mode.
#[derive(Clone, Copy, Debug)]
pub struct KernelSet<R: Real> {
    params: WeightParams,
    mode: KernelMode,
    _scalar: std::marker::PhantomData<R>,
}

impl<R: Real> KernelSet<R> {
    /// Kernels of the `M`-truncated process (`M` positive and even).
    pub fn finite(l: u32, m: usize) -> Result<Self, KernelError> {
        let params = WeightParams::new(l)?;
        if m == 0 || !m.is_multiple_of(2) {
            return Err(KernelError::BadTruncation { m });
        }
        Ok(KernelSet {
            params,
            mode: KernelMode::Finite { m },
            _scalar: std::marker::PhantomData,
        })
    }

    /// Kernels of the limiting process.
    pub fn limiting(l: u32) -> Result<Self, KernelError> {
        let params = WeightParams::new(l)?;
        Ok(KernelSet {
            params,
            mode: KernelMode::Limiting,
            _scalar: std::marker::PhantomData,
        })
    }

    pub fn l(&self) -> u32 {
        self.params.l()
    }

    pub fn mode(&self) -> KernelMode {
        self.mode
    }

    /// The scalar kernel `S(u, v)`.
    pub fn s(&self, u: KernelArg<R>, v: KernelArg<R>) -> Result<Complex<R>, KernelError> {
        u.validate()?;
        v.validate()?;
        match self.mode {
            KernelMode::Finite { m } => finite::s_finite(self.l(), m, u, v),
            KernelMode::Limiting => limiting::s_dispatch(self.l(), u, v),
        }
    }

    /// The antisymmetric kernel `D(u, v)`.
    pub fn d(&self, u: KernelArg<R>, v: KernelArg<R>) -> Result<Complex<R>, KernelError> {
        u.validate()?;
        v.validate()?;
        match self.mode {
            KernelMode::Finite { m } => finite::d_finite(self.l(), m, u, v),
            KernelMode::Limiting => limit_d(self.l(), u, v),
        }
    }

    /// The antisymmetric kernel `Itilde(u, v)` (the integrated companion
    /// of `S`, plus the half-sign term for two real arguments).
    pub fn i_tilde(&self, u: KernelArg<R>, v: KernelArg<R>) -> Result<Complex<R>, KernelError> {
        u.validate()?;
        v.validate()?;
        match self.mode {
            KernelMode::Finite { m } => finite::i_finite(self.l(), m, u, v),
            KernelMode::Limiting => limiting::i_dispatch(self.l(), u, v),
        }
    }
}
