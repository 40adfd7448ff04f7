//! Pfaffian of a complex antisymmetric matrix via Parlett-Reid
//! tridiagonalization: a congruence by Gauss transforms with pivoting
//! reduces the matrix to skew tridiagonal form, whose Pfaffian is the
//! product of every other superdiagonal entry. Each row/column swap flips
//! the sign once, and the Gauss transforms have determinant one, so the
//! Pfaffian is recovered exactly up to the tracked sign. Real matrices
//! embed with zero imaginary part.

use num_complex::Complex;

use super::{check_positive_even, LinalgError, Mat};
use crate::scalar::Real;

/// Relative tolerance for the antisymmetry check in [`SkewMatrix::new`].
const SKEW_REL_TOL: f64 = 1e-12;

/// Relative pivot threshold: a pivot column whose largest below-diagonal
/// entry falls under `PIVOT_REL_THRESHOLD * max|entry|` is treated as
/// structurally zero and the Pfaffian short-circuits to zero.
const PIVOT_REL_THRESHOLD: f64 = 1e-14;

/// A complex antisymmetric matrix (`a[(i, j)] == -a[(j, i)]`, no
/// conjugation) of positive even dimension, stored exactly antisymmetrized
/// with a zero diagonal.
#[derive(Clone, Debug)]
pub struct SkewMatrix<R: Real> {
    mat: Mat<Complex<R>>,
}

impl<R: Real> SkewMatrix<R> {
    /// Validates that `a` is square with positive even dimension and
    /// antisymmetric to within `1e-12` of its largest entry, then stores
    /// the exactly antisymmetrized part.
    pub fn new(a: Mat<Complex<R>>) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        check_positive_even(n)?;
        let mut max_abs = R::zero();
        for z in a.data() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite);
            }
            max_abs = max_abs.max(z.norm());
        }
        let tol = R::of(SKEW_REL_TOL) * max_abs;
        for i in 0..n {
            if a[(i, i)].norm() > tol {
                return Err(LinalgError::NonZeroDiagonal {
                    index: i,
                    value: a[(i, i)].norm().to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let mut max_dev = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                max_dev = max_dev.max((a[(i, j)] + a[(j, i)]).norm());
            }
        }
        if max_dev > tol {
            return Err(LinalgError::NotSkewSymmetric {
                max_dev: max_dev.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let half = Complex::new(R::of(0.5), R::zero());
        let mat = Mat::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(R::zero(), R::zero())
            } else {
                (a[(i, j)] - a[(j, i)]) * half
            }
        });
        Ok(Self { mat })
    }

    /// Builds an exactly antisymmetric matrix from a generator for the
    /// strict upper triangle. The dimension must be positive and even.
    pub fn from_upper(
        n: usize,
        mut upper: impl FnMut(usize, usize) -> Complex<R>,
    ) -> Result<Self, LinalgError> {
        check_positive_even(n)?;
        let mut mat = Mat::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                mat[(i, j)] = v;
                mat[(j, i)] = -v;
            }
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_mat(&self) -> &Mat<Complex<R>> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<Complex<R>> {
        self.mat
    }

    /// The Pfaffian of this matrix; see [`pfaffian`].
    pub fn pfaffian(&self) -> Complex<R> {
        pfaffian(self)
    }
}

/// Pfaffian of a complex antisymmetric matrix. `Pf([[0, a], [-a, 0]]) = a`,
/// and for larger matrices the result satisfies `Pf(A)^2 = det(A)`. A pivot
/// column whose below-diagonal part vanishes to within `1e-14` of the
/// largest entry short-circuits to zero, matching the determinant of such
/// a matrix.
pub fn pfaffian<R: Real>(a: &SkewMatrix<R>) -> Complex<R> {
    let n = a.dim();
    let zero = Complex::new(R::zero(), R::zero());
    let one = Complex::new(R::one(), R::zero());

    let mut m = a.as_mat().clone();
    let mut max_abs = R::zero();
    for z in m.data() {
        max_abs = max_abs.max(z.norm());
    }
    let threshold = R::of(PIVOT_REL_THRESHOLD) * max_abs;

    let mut pf = one;
    for k in (0..n - 1).step_by(2) {
        // Pivot on the largest entry below the diagonal in column k.
        let mut p = k + 1;
        for i in (k + 2)..n {
            if m[(i, k)].norm() > m[(p, k)].norm() {
                p = i;
            }
        }
        if m[(p, k)].norm() <= threshold {
            return zero;
        }
        if p != k + 1 {
            m.swap_rows(p, k + 1);
            m.swap_cols(p, k + 1);
            pf = -pf;
        }

        pf *= m[(k, k + 1)];
        if k + 2 >= n {
            break;
        }

        let pivot = m[(k + 1, k)];
        let t: Vec<Complex<R>> = ((k + 2)..n).map(|j| m[(j, k)] / pivot).collect();
        for i in (k + 2)..n {
            for j in (k + 2)..n {
                let update = t[i - k - 2] * m[(k + 1, j)] - t[j - k - 2] * m[(k + 1, i)];
                m[(i, j)] -= update;
            }
        }
        // Row and column k+1 are consumed; zero the eliminated strip so the
        // trailing iterations see exact zeros.
        for j in (k + 2)..n {
            m[(k, j)] = zero;
            m[(j, k)] = zero;
            m[(k + 1, j)] = zero;
            m[(j, k + 1)] = zero;
        }
    }

    pf
}
