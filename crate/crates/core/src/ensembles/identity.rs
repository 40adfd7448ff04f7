//! Finite-size determinant identity linking the truncated block of a
//! Haar-orthogonal matrix to its complementary corner:
//!
//! ```text
//! det(zI - V^T) / det(I - zV) = (-1)^M det(U) det(A + z B (I - zV)^{-1} C)
//! ```
//!
//! where `U = [[A, B], [C, V]]` is `(L+M) x (L+M)` orthogonal with `V` the
//! bottom-right `M x M` block and `|z| < 1`.

use num_complex::Complex;
use rand::Rng;

use super::haar::haar_orthogonal;
use super::{EnsembleError, MAX_RESAMPLES};
use crate::linalg::{LuFactors, Mat};
use crate::scalar::Real;

/// Outcome of one check of the determinant identity.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck<R: Real> {
    /// Relative gap `|lhs - rhs| / max(|lhs|, |rhs|)` between the two sides.
    pub residual: R,
    /// The evaluation point actually used, after any resampling.
    pub z: Complex<R>,
    /// How many times `z` was redrawn because `I - zV` was too close to
    /// singular to solve reliably.
    pub z_resamples: u32,
}

fn promote<R: Real>(a: &Mat<R>) -> Mat<Complex<R>> {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].into_complex())
}

fn max_norm<R: Real>(a: &Mat<Complex<R>>) -> R {
    a.data()
        .iter()
        .map(|v| v.norm())
        .fold(R::zero(), R::max)
}

/// Draws one Haar-orthogonal `(L+M) x (L+M)` matrix and evaluates both
/// sides of the determinant identity at `z`, `|z| < 1`.
///
/// If the solve for `(I - zV)^{-1} C` is unreliable (singular factor or
/// relative back-substitution residual above `1e-8`), the check point is
/// redrawn uniformly from the square `(-0.7, 0.7)^2` and the attempt is
/// reported in the result.
pub fn verify_determinant_identity<R: Real, G: Rng + ?Sized>(
    l: u32,
    m: usize,
    z: Complex<R>,
    rng: &mut G,
) -> Result<IdentityCheck<R>, EnsembleError> {
    if l == 0 {
        return Err(EnsembleError::BadBlockOrder);
    }
    if m == 0 {
        return Err(EnsembleError::BadMatrixSize);
    }
    let modulus = z.norm();
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // non-finite z must also land here
    if !(modulus < R::one()) {
        return Err(EnsembleError::OutsideDisk {
            modulus: modulus.to_f64().unwrap_or(f64::NAN),
        });
    }

    let lb = l as usize;
    let u: Mat<R> = haar_orthogonal(lb + m, rng)?;
    let a = Mat::from_fn(lb, lb, |i, j| u[(i, j)].into_complex());
    let b = Mat::from_fn(lb, m, |i, j| u[(i, lb + j)].into_complex());
    let c = Mat::from_fn(m, lb, |i, j| u[(lb + i, j)].into_complex());
    let v = Mat::from_fn(m, m, |i, j| u[(lb + i, lb + j)].into_complex());
    let det_u = LuFactors::factor(&promote(&u))?.det();
    let sign = if m.is_multiple_of(2) { R::one() } else { -R::one() };
    let c_norm = max_norm(&c);

    let mut z = z;
    let mut z_resamples = 0;
    while z_resamples <= MAX_RESAMPLES {
        let resolvent = Mat::from_fn(m, m, |i, j| {
            let delta = if i == j {
                Complex::new(R::one(), R::zero())
            } else {
                Complex::new(R::zero(), R::zero())
            };
            delta - z * v[(i, j)]
        });
        let solved = match LuFactors::factor(&resolvent) {
            Ok(lu) if !lu.is_singular() => lu.solve_mat(&c).map(|x| (lu, x)),
            _ => Err(crate::linalg::LinalgError::Singular { cond_estimate: f64::INFINITY }),
        };
        let (lu, x) = match solved {
            Ok(pair) => pair,
            Err(_) => {
                z = redraw_point(rng);
                z_resamples += 1;
                continue;
            }
        };
        let back = Mat::from_fn(m, lb, |i, j| {
            let mut acc = Complex::new(R::zero(), R::zero());
            for k in 0..m {
                acc += resolvent[(i, k)] * x[(k, j)];
            }
            acc - c[(i, j)]
        });
        if max_norm(&back) > R::of(1e-8) * c_norm {
            z = redraw_point(rng);
            z_resamples += 1;
            continue;
        }

        let shifted = Mat::from_fn(m, m, |i, j| {
            let delta = if i == j {
                Complex::new(R::one(), R::zero())
            } else {
                Complex::new(R::zero(), R::zero())
            };
            z * delta - v[(j, i)]
        });
        let lhs = LuFactors::factor(&shifted)?.det() / lu.det();

        let corner = Mat::from_fn(lb, lb, |i, j| {
            let mut acc = Complex::new(R::zero(), R::zero());
            for k in 0..m {
                acc += b[(i, k)] * x[(k, j)];
            }
            a[(i, j)] + z * acc
        });
        let rhs = det_u * LuFactors::factor(&corner)?.det() * sign.into_complex();

        let scale = lhs.norm().max(rhs.norm());
        let residual = if scale > R::zero() {
            (lhs - rhs).norm() / scale
        } else {
            R::zero()
        };
        return Ok(IdentityCheck {
            residual,
            z,
            z_resamples,
        });
    }
    Err(EnsembleError::TooManyResamples {
        what: "identity check point",
        attempts: z_resamples,
    })
}

fn redraw_point<R: Real, G: Rng + ?Sized>(rng: &mut G) -> Complex<R> {
    // The square (-0.7, 0.7)^2 sits inside the unit disk.
    let re: f64 = rng.gen_range(-0.7..0.7);
    let im: f64 = rng.gen_range(-0.7..0.7);
    Complex::new(R::of(re), R::of(im))
}
