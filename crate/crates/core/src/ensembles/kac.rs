//! Random polynomials with iid standard-Gaussian coefficients: root
//! spectra via the companion matrix, and fast real-zero counting via
//! sign changes on a tanh-spaced grid.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::classify::classify_roots;
use super::{EnsembleError, EnsembleKind, Spectrum, SpectrumMeta, MAX_RESAMPLES};
use crate::linalg::{eigenvalues, LinalgError, Mat};
use crate::scalar::Real;

/// Leading coefficients below this are treated as a degenerate draw and
/// resampled (probability ~1e-300 for a standard normal).
const LEADING_COEFF_MIN: f64 = 1e-300;

/// Grid step in the stretched coordinate `s = artanh(x)`.
const GRID_STEP: f64 = 0.01;

/// Coefficients `a_0, ..., a_n` of a degree-`n` draw, low order first.
pub(crate) fn kac_coefficients<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> Vec<R> {
    (0..=n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            R::of(g)
        })
        .collect()
}

fn leading_is_degenerate<R: Real>(coeffs: &[R]) -> bool {
    coeffs.last().is_none_or(|a| a.abs() < R::of(LEADING_COEFF_MIN))
}

/// Companion matrix of the monic rescaling of `a_0 + a_1 x + ... + a_n x^n`.
fn companion<R: Real>(coeffs: &[R]) -> Mat<R> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    Mat::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            R::one()
        } else {
            R::zero()
        }
    })
}

/// Scalar Horner evaluation of `a_0 + a_1 x + ... + a_n x^n`.
pub(crate) fn eval_poly<R: Real>(coeffs: &[R], x: R) -> R {
    let mut acc = R::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Horner evaluation at every grid point, looping over coefficients on
/// the outside so the inner update vectorizes across the grid.
fn eval_poly_grid<R: Real>(coeffs: &[R], xs: &[R]) -> Vec<R> {
    let n = coeffs.len() - 1;
    let mut vals = vec![coeffs[n]; xs.len()];
    for p in (0..n).rev() {
        let c = coeffs[p];
        for (v, &x) in vals.iter_mut().zip(xs) {
            *v = *v * x + c;
        }
    }
    vals
}

/// Sign changes along a sampled function, counting an exact grid zero
/// once without also counting the flip around it.
fn sign_changes<R: Real>(vals: &[R]) -> usize {
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for &v in vals {
        if v == R::zero() {
            count += 1;
            prev = None;
            continue;
        }
        let sign = v > R::zero();
        if prev == Some(!sign) {
            count += 1;
        }
        prev = Some(sign);
    }
    count
}

/// Symmetric tanh-spaced grid covering `|x| < tanh(s*)` with
/// `s* = ln(2n)/2 + 8`, wide enough that the expected number of real
/// zeros beyond it is negligible at any feasible degree.
fn counting_grid<R: Real>(n: usize) -> Vec<R> {
    let s_star = 0.5 * (2.0 * n as f64).ln() + 8.0;
    let steps = (2.0 * s_star / GRID_STEP).ceil() as usize;
    (0..=steps)
        .map(|i| R::of((-s_star + i as f64 * GRID_STEP).tanh()))
        .collect()
}

/// Root spectrum of a degree-`n` Gaussian-coefficient polynomial via the
/// companion matrix, split into real roots and upper-half-plane
/// conjugate representatives. Roots of any modulus are retained; those
/// outside the closed unit disk are tallied in the metadata.
pub fn kac_spectrum<R: Real, G: Rng + ?Sized>(
    n: usize,
    rng: &mut G,
) -> Result<Spectrum<R>, EnsembleError> {
    if n == 0 {
        return Err(EnsembleError::BadDegree);
    }
    let mut rejections = 0;
    while rejections <= MAX_RESAMPLES {
        let coeffs: Vec<R> = kac_coefficients(n, rng);
        if leading_is_degenerate(&coeffs) {
            rejections += 1;
            continue;
        }
        let roots = match eigenvalues(&companion(&coeffs)) {
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
        let one = R::one();
        let outside = real.iter().filter(|x| x.abs() > one).count()
            + 2 * upper.iter().filter(|z| z.norm() > one).count();
        let mut meta = SpectrumMeta::new(EnsembleKind::Kac, rejections);
        meta.outside_unit = outside;
        return Ok(Spectrum { real, upper, meta });
    }
    Err(EnsembleError::TooManyResamples {
        what: "polynomial coefficient draw",
        attempts: rejections,
    })
}

/// Number of real zeros (anywhere on the line) of one degree-`n` draw,
/// counted as sign changes of the polynomial on a tanh grid inside the
/// unit interval plus sign changes of its coefficient-reversed partner,
/// whose zeros in `(-1, 1)` are the reciprocals of the zeros outside.
pub fn kac_real_count<R: Real, G: Rng + ?Sized>(
    n: usize,
    rng: &mut G,
) -> Result<usize, EnsembleError> {
    if n == 0 {
        return Err(EnsembleError::BadDegree);
    }
    let mut rejections = 0;
    while rejections <= MAX_RESAMPLES {
        let coeffs: Vec<R> = kac_coefficients(n, rng);
        if leading_is_degenerate(&coeffs) {
            rejections += 1;
            continue;
        }
        let xs = counting_grid::<R>(n);
        let inside = sign_changes(&eval_poly_grid(&coeffs, &xs));
        let reversed: Vec<R> = coeffs.iter().rev().copied().collect();
        let outside = sign_changes(&eval_poly_grid(&reversed, &xs));
        return Ok(inside + outside);
    }
    Err(EnsembleError::TooManyResamples {
        what: "polynomial coefficient draw",
        attempts: rejections,
    })
}

/// Real zeros of one degree-`n` draw inside the window `(lo, hi)` with
/// `-1 < lo < hi < 1`, located by sign changes on a tanh grid followed
/// by bisection, returned in ascending order.
pub fn kac_real_zeros_in<R: Real, G: Rng + ?Sized>(
    n: usize,
    lo: R,
    hi: R,
    rng: &mut G,
) -> Result<Vec<R>, EnsembleError> {
    if n == 0 {
        return Err(EnsembleError::BadDegree);
    }
    let one = R::one();
    if !(lo < hi && lo > -one && hi < one) {
        return Err(EnsembleError::BadWindow {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut rejections = 0;
    while rejections <= MAX_RESAMPLES {
        let coeffs: Vec<R> = kac_coefficients(n, rng);
        if leading_is_degenerate(&coeffs) {
            rejections += 1;
            continue;
        }
        let s_lo = lo.atanh();
        let s_hi = hi.atanh();
        let span = (s_hi - s_lo).to_f64().unwrap_or(f64::NAN);
        let steps = (span / GRID_STEP).ceil().max(1.0) as usize;
        let ds = (s_hi - s_lo) / R::of(steps as f64);
        let xs: Vec<R> = (0..=steps)
            .map(|i| {
                if i == steps {
                    hi
                } else {
                    (s_lo + ds * R::of(i as f64)).tanh()
                }
            })
            .collect();
        let vals: Vec<R> = eval_poly_grid(&coeffs, &xs);

        let mut zeros = Vec::new();
        for i in 0..steps {
            if vals[i] == R::zero() {
                zeros.push(xs[i]);
            } else if vals[i + 1] != R::zero()
                && (vals[i] > R::zero()) != (vals[i + 1] > R::zero())
            {
                zeros.push(bisect(&coeffs, xs[i], xs[i + 1], vals[i]));
            }
        }
        if *vals.last().unwrap() == R::zero() {
            zeros.push(hi);
        }
        return Ok(zeros);
    }
    Err(EnsembleError::TooManyResamples {
        what: "polynomial coefficient draw",
        attempts: rejections,
    })
}

fn bisect<R: Real>(coeffs: &[R], mut lo: R, mut hi: R, mut flo: R) -> R {
    let half = R::of(0.5);
    for _ in 0..200 {
        let mid = (lo + hi) * half;
        if mid == lo || mid == hi {
            return mid;
        }
        let fmid = eval_poly(coeffs, mid);
        if fmid == R::zero() {
            return mid;
        }
        if (flo > R::zero()) != (fmid > R::zero()) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    (lo + hi) * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::draw_rng;
    use num_complex::Complex;

    fn eval_poly_complex(coeffs: &[f64], z: Complex<f64>) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    #[test]
    fn degree_one_has_the_explicit_root() {
        for draw in 0..10 {
            let mut coeff_rng = draw_rng(21, draw);
            let coeffs: Vec<f64> = kac_coefficients(1, &mut coeff_rng);
            let expected = -coeffs[0] / coeffs[1];

            let mut rng = draw_rng(21, draw);
            let s: Spectrum<f64> = kac_spectrum(1, &mut rng).unwrap();
            assert_eq!(s.real.len(), 1);
            assert!(s.upper.is_empty());
            let scale = expected.abs().max(1.0);
            assert!((s.real[0] - expected).abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn companion_roots_have_small_residuals() {
        let n = 40;
        for draw in 0..20 {
            let mut coeff_rng = draw_rng(23, draw);
            let coeffs: Vec<f64> = kac_coefficients(n, &mut coeff_rng);

            let mut rng = draw_rng(23, draw);
            let s: Spectrum<f64> = kac_spectrum(n, &mut rng).unwrap();
            assert_eq!(s.total_size(), n);

            let check = |z: Complex<f64>| {
                let scale: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(p, a)| a.abs() * z.norm().powi(p as i32))
                    .sum();
                let residual = eval_poly_complex(&coeffs, z).norm() / scale;
                assert!(residual < 1e-6, "draw {draw}: residual {residual} at {z}");
            };
            for &x in &s.real {
                check(Complex::new(x, 0.0));
            }
            for &z in &s.upper {
                check(z);
            }
        }
    }

    #[test]
    fn outside_unit_tally_matches_the_moduli() {
        for draw in 0..10 {
            let mut rng = draw_rng(27, draw);
            let s: Spectrum<f64> = kac_spectrum(25, &mut rng).unwrap();
            let outside = s.real.iter().filter(|x| x.abs() > 1.0).count()
                + 2 * s.upper.iter().filter(|z| z.norm() > 1.0).count();
            assert_eq!(s.meta.outside_unit, outside);
            assert!(outside > 0, "degree 25 should place roots outside the disk");
        }
    }

    #[test]
    fn sign_change_count_matches_the_companion_spectrum() {
        for &n in &[30usize, 60] {
            for draw in 0..40 {
                let mut count_rng = draw_rng(29, draw);
                let counted = kac_real_count::<f64, _>(n, &mut count_rng).unwrap();

                let mut spec_rng = draw_rng(29, draw);
                let s: Spectrum<f64> = kac_spectrum(n, &mut spec_rng).unwrap();
                assert_eq!(
                    counted,
                    s.real.len(),
                    "degree {n}, draw {draw}: grid {counted} vs companion {}",
                    s.real.len()
                );
            }
        }
    }

    #[test]
    fn windowed_zeros_match_the_companion_roots() {
        let (lo, hi) = (-0.9, 0.9);
        for draw in 0..20 {
            let mut win_rng = draw_rng(33, draw);
            let zeros = kac_real_zeros_in::<f64, _>(50, lo, hi, &mut win_rng).unwrap();

            let mut spec_rng = draw_rng(33, draw);
            let s: Spectrum<f64> = kac_spectrum(50, &mut spec_rng).unwrap();
            let mut expected: Vec<f64> = s
                .real
                .iter()
                .copied()
                .filter(|x| (lo..hi).contains(x))
                .collect();
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());

            assert_eq!(zeros.len(), expected.len(), "draw {draw}");
            for (z, e) in zeros.iter().zip(&expected) {
                assert!((z - e).abs() < 1e-8, "draw {draw}: {z} vs {e}");
            }
            assert!(zeros.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = draw_rng(1, 0);
        assert!(matches!(
            kac_spectrum::<f64, _>(0, &mut rng),
            Err(EnsembleError::BadDegree)
        ));
        assert!(matches!(
            kac_real_count::<f64, _>(0, &mut rng),
            Err(EnsembleError::BadDegree)
        ));
        assert!(matches!(
            kac_real_zeros_in::<f64, _>(10, 0.5, 0.5, &mut rng),
            Err(EnsembleError::BadWindow { .. })
        ));
        assert!(matches!(
            kac_real_zeros_in::<f64, _>(10, -1.0, 0.5, &mut rng),
            Err(EnsembleError::BadWindow { .. })
        ));
    }
}
