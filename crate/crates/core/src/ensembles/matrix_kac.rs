//! Matrix-coefficient random polynomials: zeros of
//! `det(A_0 + A_1 x + ... + A_N x^N)` with iid standard-Gaussian `L x L`
//! coefficient blocks, via the block companion matrix.

use num_complex::Complex;
use rand::Rng;

use super::classify::classify_roots;
use super::haar::gaussian_matrix;
use super::{EnsembleError, EnsembleKind, Spectrum, SpectrumMeta, MAX_RESAMPLES};
use crate::linalg::{cond_1, eigenvalues, LinalgError, LuFactors, Mat};
use crate::scalar::Real;

/// Default margin for the unit-disk filter: only zeros with modulus
/// below `1 - delta` are kept, keeping the retained set well inside the
/// region where the degree cutoff no longer matters.
pub const MATRIX_KAC_DEFAULT_DELTA: f64 = 0.05;

/// Leading coefficient blocks with 1-norm condition estimates above this
/// are rejected and redrawn rather than inverted.
pub const LEADING_BLOCK_COND_LIMIT: f64 = 1e10;

fn promote<R: Real>(a: &Mat<R>) -> Mat<Complex<R>> {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].into_complex())
}

/// Zeros of a matrix-coefficient draw with the default filter margin.
pub fn matrix_kac_spectrum<R: Real, G: Rng + ?Sized>(
    l: u32,
    n: usize,
    rng: &mut G,
) -> Result<Spectrum<R>, EnsembleError> {
    matrix_kac_spectrum_filtered(l, n, R::of(MATRIX_KAC_DEFAULT_DELTA), rng)
}

/// Zeros of `det(A_0 + A_1 x + ... + A_N x^N)` inside the disk of radius
/// `1 - delta`, computed as eigenvalues of the block companion matrix of
/// the monic rescaling `A_N^{-1} A_p`. Zeros at or beyond the filter
/// radius are dropped and tallied in the metadata; draws whose leading
/// block is ill-conditioned are rejected and redrawn.
pub fn matrix_kac_spectrum_filtered<R: Real, G: Rng + ?Sized>(
    l: u32,
    n: usize,
    delta: R,
    rng: &mut G,
) -> Result<Spectrum<R>, EnsembleError> {
    if l == 0 {
        return Err(EnsembleError::BadBlockOrder);
    }
    if n == 0 {
        return Err(EnsembleError::BadDegree);
    }
    if !(delta >= R::zero() && delta < R::one()) {
        return Err(EnsembleError::BadFilterMargin {
            delta: delta.to_f64().unwrap_or(f64::NAN),
        });
    }

    let block = l as usize;
    let size = block * n;
    let cond_limit = R::of(LEADING_BLOCK_COND_LIMIT);
    let mut rejections = 0;
    while rejections <= MAX_RESAMPLES {
        // Low-order block first; for L = 1 this is the same entry stream
        // as the scalar-coefficient sampler.
        let coeffs: Vec<Mat<R>> = (0..=n).map(|_| gaussian_matrix(block, rng)).collect();
        let leading = promote(&coeffs[n]);
        match cond_1(&leading) {
            Ok(cond) if cond > cond_limit => {
                rejections += 1;
                continue;
            }
            Ok(_) => {}
            Err(LinalgError::Singular { .. }) => {
                rejections += 1;
                continue;
            }
            Err(other) => return Err(EnsembleError::Linalg(other)),
        }
        let lu = match LuFactors::factor(&leading) {
            Ok(lu) => lu,
            Err(LinalgError::Singular { .. }) => {
                rejections += 1;
                continue;
            }
            Err(other) => return Err(EnsembleError::Linalg(other)),
        };

        let mut companion: Mat<R> = Mat::zeros(size, size);
        for i in 0..block * (n - 1) {
            companion[(i, block + i)] = R::one();
        }
        for (p, a) in coeffs.iter().take(n).enumerate() {
            // The promoted blocks have exactly zero imaginary parts, and
            // complex arithmetic on such numbers keeps them zero, so the
            // real part below is the exact real solution.
            let tilde = lu.solve_mat(&promote(a))?;
            for r in 0..block {
                for c in 0..block {
                    companion[(block * (n - 1) + r, block * p + c)] = -tilde[(r, c)].re;
                }
            }
        }

        let roots = match eigenvalues(&companion) {
            Ok(roots) => roots,
            Err(LinalgError::NoConvergence { .. }) => {
                rejections += 1;
                continue;
            }
            Err(other) => return Err(EnsembleError::Linalg(other)),
        };
        let (real, upper) = match classify_roots(&roots) {
            Ok(split) => split,
            Err(EnsembleError::PairingFailed { .. }) => {
                rejections += 1;
                continue;
            }
            Err(other) => return Err(other),
        };

        let bound = R::one() - delta;
        let kept_real: Vec<R> = real.iter().copied().filter(|x| x.abs() < bound).collect();
        let kept_upper: Vec<Complex<R>> =
            upper.iter().copied().filter(|z| z.norm() < bound).collect();
        let dropped =
            (real.len() - kept_real.len()) + 2 * (upper.len() - kept_upper.len());
        let mut meta = SpectrumMeta::new(EnsembleKind::MatrixKac, rejections);
        meta.filtered_out = dropped;
        return Ok(Spectrum {
            real: kept_real,
            upper: kept_upper,
            meta,
        });
    }
    Err(EnsembleError::TooManyResamples {
        what: "matrix coefficient draw",
        attempts: rejections,
    })
}
