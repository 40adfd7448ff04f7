//! Cholesky factorizations: real symmetric positive definite and complex
//! Hermitian positive definite, with the triangular solves built on them.

use num_complex::Complex;

use super::{LinalgError, Mat};
use crate::scalar::Real;

fn check_square<T: Copy>(a: &Mat<T>) -> Result<usize, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(a.rows())
}

/// Lower-triangular L with A = L L^T for real symmetric positive definite A.
///
/// Symmetry is validated to a relative 1e-12 before factoring.
pub fn cholesky_real<R: Real>(a: &Mat<R>) -> Result<Mat<R>, LinalgError> {
    let n = check_square(a)?;
    let mut max_abs = R::zero();
    let mut max_dev = R::zero();
    for i in 0..n {
        for j in 0..n {
            if !a[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite);
            }
            max_abs = max_abs.max(a[(i, j)].abs());
            max_dev = max_dev.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    let tol = R::of(1e-12) * max_abs.max(R::one());
    if max_dev > tol {
        return Err(LinalgError::NotSymmetric {
            max_dev: max_dev.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= R::zero() || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { pivot_index: j });
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// Lower-triangular L with A = L L^dagger for Hermitian positive definite A.
pub fn cholesky_hermitian<R: Real>(
    a: &Mat<Complex<R>>,
) -> Result<Mat<Complex<R>>, LinalgError> {
    let n = check_square(a)?;
    let mut max_abs = R::zero();
    let mut max_dev = R::zero();
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite);
            }
            max_abs = max_abs.max(z.norm());
            max_dev = max_dev.max((z - a[(j, i)].conj()).norm());
        }
    }
    let tol = R::of(1e-12) * max_abs.max(R::one());
    if max_dev > tol {
        return Err(LinalgError::NotSymmetric {
            max_dev: max_dev.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut l: Mat<Complex<R>> = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= R::zero() || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { pivot_index: j });
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex::new(dj, R::zero());
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                let sub = l[(i, k)] * l[(j, k)].conj();
                s -= sub;
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// det(A) = prod L_jj^2 for a factored real or Hermitian matrix; the
/// caller passes the diagonal-extraction closure appropriate to the type.
pub fn tri_det_sq<R: Real>(l_diag: impl Iterator<Item = R>) -> R {
    let mut d = R::one();
    for x in l_diag {
        d = d * x * x;
    }
    d
}

/// Solve A x = b given the real Cholesky factor L (A = L L^T).
pub fn tri_solve_real<R: Real>(l: &Mat<R>, b: &[R]) -> Vec<R> {
    let n = l.rows();
    debug_assert_eq!(b.len(), n);
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let sub = l[(i, k)] * y[k];
            y[i] -= sub;
        }
        y[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let sub = l[(k, i)] * y[k];
            y[i] -= sub;
        }
        y[i] /= l[(i, i)];
    }
    y
}

/// Solve A X = B given the Hermitian Cholesky factor L (A = L L^dagger).
pub fn hermitian_solve_mat<R: Real>(l: &Mat<Complex<R>>, b: &Mat<Complex<R>>) -> Mat<Complex<R>> {
    let n = l.rows();
    debug_assert_eq!(b.rows(), n);
    let mut x = b.clone();
    // Forward: L Y = B.
    for j in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, j)];
            for k in 0..i {
                let sub = l[(i, k)] * x[(k, j)];
                s -= sub;
            }
            x[(i, j)] = s / l[(i, i)];
        }
    }
    // Backward: L^dagger X = Y.
    for j in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in (i + 1)..n {
                let sub = l[(k, i)].conj() * x[(k, j)];
                s -= sub;
            }
            x[(i, j)] = s / l[(i, i)].conj();
        }
    }
    x
}
