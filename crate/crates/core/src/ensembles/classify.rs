//! Splitting a real matrix's spectrum into real eigenvalues and
//! conjugate-pair representatives.
//!
//! Double-precision nonsymmetric eigen-solvers report spurious imaginary
//! parts near the rounding scale, so realness is decided by a relative
//! tolerance rather than exact zeroness, and conjugate pairs are repaired
//! by nearest-conjugate matching and averaging.

use num_complex::Complex;

use super::EnsembleError;
use crate::scalar::Real;

/// An eigenvalue is classified as real when `|Im| < tol * max(1, |lambda|)`
/// with this tolerance.
pub const CLASSIFICATION_TOL: f64 = 1e-8;

/// Classifies `roots` with the default [`CLASSIFICATION_TOL`].
pub fn classify_roots<R: Real>(
    roots: &[Complex<R>],
) -> Result<(Vec<R>, Vec<Complex<R>>), EnsembleError> {
    classify_roots_with(roots, R::of(CLASSIFICATION_TOL))
}

/// Splits a real-matrix spectrum into real values and one upper-half-plane
/// representative per conjugate pair.
///
/// Values with `|Im| < tol * max(1, |lambda|)` are real. The rest must
/// balance across the real axis; each upper value is matched with the
/// nearest conjugate below and the pair is averaged, which cancels the
/// solver's asymmetric rounding.
pub fn classify_roots_with<R: Real>(
    roots: &[Complex<R>],
    tol: R,
) -> Result<(Vec<R>, Vec<Complex<R>>), EnsembleError> {
    let mut real = Vec::new();
    let mut above = Vec::new();
    let mut below = Vec::new();
    for &z in roots {
        if z.im.abs() < tol * R::one().max(z.norm()) {
            real.push(z.re);
        } else if z.im > R::zero() {
            above.push(z);
        } else {
            below.push(z);
        }
    }
    if above.len() != below.len() {
        return Err(EnsembleError::PairingFailed {
            positive: above.len(),
            negative: below.len(),
        });
    }

    let half = R::of(0.5);
    let mut used = vec![false; below.len()];
    let mut upper = Vec::with_capacity(above.len());
    for &p in &above {
        let mut best = usize::MAX;
        let mut best_dist = R::infinity();
        for (i, &q) in below.iter().enumerate() {
            if used[i] {
                continue;
            }
            let dist = (q.conj() - p).norm();
            if dist < best_dist {
                best_dist = dist;
                best = i;
            }
        }
        let q = below[best];
        used[best] = true;
        upper.push(Complex::new(
            half * (p.re + q.re),
            half * (p.im - q.im),
        ));
    }
    Ok((real, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn splits_reals_from_pairs_and_averages() {
        let roots = [
            c(0.5, 1e-12),
            c(0.3, 0.4 + 1e-13),
            c(0.3 - 1e-13, -0.4),
            c(-0.9, -1e-15),
        ];
        let (real, upper) = classify_roots(&roots).unwrap();
        assert_eq!(real, vec![0.5, -0.9]);
        assert_eq!(upper.len(), 1);
        assert!((upper[0].re - 0.3).abs() < 1e-13);
        assert!((upper[0].im - 0.4).abs() < 1e-13);
        assert!(upper[0].im > 0.0);
    }

    #[test]
    fn nearest_conjugate_matching_handles_close_pairs() {
        // Two nearby pairs whose solver outputs are slightly asymmetric.
        let roots = [
            c(0.10, 0.200),
            c(0.10, 0.210),
            c(0.10 + 1e-11, -0.200),
            c(0.10, -0.210 - 1e-11),
        ];
        let (real, upper) = classify_roots(&roots).unwrap();
        assert!(real.is_empty());
        let mut ims: Vec<f64> = upper.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] - 0.200).abs() < 1e-10);
        assert!((ims[1] - 0.210).abs() < 1e-10);
    }

    #[test]
    fn unbalanced_spectra_are_rejected() {
        let roots = [c(0.1, 0.5), c(0.2, 0.6), c(0.1, -0.5)];
        assert!(matches!(
            classify_roots(&roots),
            Err(EnsembleError::PairingFailed {
                positive: 2,
                negative: 1
            })
        ));
    }

    #[test]
    fn relative_tolerance_scales_with_magnitude() {
        // |Im| = 3e-9 at |lambda| ~ 1 is real; the same at |lambda| = 1e-4
        // is still judged against max(1, |lambda|) = 1.
        let roots = [c(1.0, 3e-9), c(1e-4, 3e-9)];
        let (real, upper) = classify_roots(&roots).unwrap();
        assert_eq!(real.len(), 2);
        assert!(upper.is_empty());
    }
}
