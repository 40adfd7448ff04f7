//! LU factorization with partial pivoting for complex matrices, backing
//! determinants, linear solves, and inverses.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{LinalgError, Mat};
use crate::scalar::Real;

/// Relative pivot threshold below which a matrix is treated as singular.
fn pivot_floor<R: Real>(max_abs: R) -> R {
    R::of(1e-14) * max_abs
}

/// Packed LU factors of a square complex matrix.
pub struct LuFactors<R: Real> {
    lu: Mat<Complex<R>>,
    perm: Vec<usize>,
    sign_flips: usize,
    /// First column where no usable pivot was found, if any.
    singular_at: Option<usize>,
    max_abs: R,
}

impl<R: Real> LuFactors<R> {
    pub fn factor(a: &Mat<Complex<R>>) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut max_abs = R::zero();
        for &z in lu.data() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite);
            }
            max_abs = max_abs.max(z.norm());
        }
        let mut perm = Vec::with_capacity(n);
        let mut sign_flips = 0usize;
        let mut singular_at = None;
        let floor = pivot_floor(max_abs);

        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let cand = lu[(i, k)].norm();
                if cand > best {
                    best = cand;
                    p = i;
                }
            }
            if p != k {
                lu.swap_rows(p, k);
                sign_flips += 1;
            }
            perm.push(p);
            if best <= floor {
                if singular_at.is_none() {
                    singular_at = Some(k);
                }
                continue;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                for j in (k + 1)..n {
                    let sub = m * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Ok(LuFactors {
            lu,
            perm,
            sign_flips,
            singular_at,
            max_abs,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    /// Ratio of largest to smallest pivot magnitude; a cheap condition
    /// indicator attached to singularity errors.
    pub fn pivot_cond_estimate(&self) -> f64 {
        let n = self.lu.rows();
        let mut hi = R::zero();
        let mut lo = R::infinity();
        for k in 0..n {
            let d = self.lu[(k, k)].norm();
            hi = hi.max(d);
            lo = lo.min(d);
        }
        if lo == R::zero() {
            f64::INFINITY
        } else {
            (hi / lo).to_f64().unwrap_or(f64::INFINITY)
        }
    }

    /// Determinant as the signed product of pivots. A matrix flagged
    /// singular yields the (near-)zero product rather than an error.
    pub fn det(&self) -> Complex<R> {
        let n = self.lu.rows();
        let mut d = Complex::<R>::one();
        for k in 0..n {
            d *= self.lu[(k, k)];
        }
        if self.sign_flips % 2 == 1 {
            d = -d;
        }
        d
    }

    fn require_nonsingular(&self) -> Result<(), LinalgError> {
        if self.is_singular() {
            Err(LinalgError::Singular {
                cond_estimate: self.pivot_cond_estimate(),
            })
        } else {
            Ok(())
        }
    }

    /// Solve A x = b for one right-hand side.
    pub fn solve_vec(&self, b: &[Complex<R>]) -> Result<Vec<Complex<R>>, LinalgError> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(LinalgError::ShapeMismatch {
                left: (n, n),
                right: (b.len(), 1),
            });
        }
        self.require_nonsingular()?;
        let mut x = b.to_vec();
        for (k, &p) in self.perm.iter().enumerate() {
            x.swap(k, p);
        }
        for k in 0..n {
            for i in (k + 1)..n {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
        }
        for k in (0..n).rev() {
            for j in (k + 1)..n {
                let sub = self.lu[(k, j)] * x[j];
                x[k] -= sub;
            }
            x[k] /= self.lu[(k, k)];
        }
        Ok(x)
    }

    /// Solve A X = B column by column.
    pub fn solve_mat(&self, b: &Mat<Complex<R>>) -> Result<Mat<Complex<R>>, LinalgError> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(LinalgError::ShapeMismatch {
                left: (n, n),
                right: (b.rows(), b.cols()),
            });
        }
        let mut out = Mat::zeros(n, b.cols());
        let mut col = vec![Complex::<R>::zero(); n];
        for j in 0..b.cols() {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve_vec(&col)?;
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Mat<Complex<R>>, LinalgError> {
        let n = self.lu.rows();
        self.solve_mat(&Mat::identity(n))
    }

    pub fn max_abs(&self) -> R {
        self.max_abs
    }
}

/// Determinant of a square complex matrix.
pub fn det<R: Real>(a: &Mat<Complex<R>>) -> Result<Complex<R>, LinalgError> {
    Ok(LuFactors::factor(a)?.det())
}

/// Solution of A x = b.
pub fn solve<R: Real>(
    a: &Mat<Complex<R>>,
    b: &[Complex<R>],
) -> Result<Vec<Complex<R>>, LinalgError> {
    LuFactors::factor(a)?.solve_vec(b)
}

/// Matrix inverse.
pub fn inverse<R: Real>(a: &Mat<Complex<R>>) -> Result<Mat<Complex<R>>, LinalgError> {
    LuFactors::factor(a)?.inverse()
}

/// One-norm condition number ||A||_1 ||A^-1||_1 (exact, via the inverse;
/// intended for diagnostics on the small matrices used here).
pub fn cond_1<R: Real>(a: &Mat<Complex<R>>) -> Result<R, LinalgError> {
    fn one_norm<R: Real>(m: &Mat<Complex<R>>) -> R {
        let mut best = R::zero();
        for j in 0..m.cols() {
            let mut s = R::zero();
            for i in 0..m.rows() {
                s += m[(i, j)].norm();
            }
            best = best.max(s);
        }
        best
    }
    let inv = inverse(a)?;
    Ok(one_norm(a) * one_norm(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_of_known_complex_matrix() {
        // [[1+i, 2], [3, 4-i]] has det (1+i)(4-i) - 6 = (5+3i) - 6 = -1+3i.
        let a = Mat::from_vec(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, -1.0)]);
        let d = det(&a).unwrap();
        assert!((d - c(-1.0, 3.0)).norm() < 1e-14);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let mut seed = 0x12345u64;
        let mut next = move || {
            // Small xorshift so this test has no RNG dependency.
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 12;
        let a = Mat::from_fn(n, n, |i, j| {
            c(next(), next()) + if i == j { c(4.0, 0.0) } else { c(0.0, 0.0) }
        });
        let inv = inverse(&a).unwrap();
        let prod = inv.dot(&a);
        let mut max_dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                max_dev = max_dev.max((prod[(i, j)] - expect).norm());
            }
        }
        assert!(max_dev < 1e-12, "max deviation {max_dev:e}");
    }

    #[test]
    fn solve_matches_direct_substitution() {
        let a = Mat::from_vec(2, 2, vec![c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)]);
        let x = solve(&a, &[c(5.0, 0.0), c(10.0, 0.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((x[1] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let a = Mat::from_vec(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let f = LuFactors::<f64>::factor(&a).unwrap();
        assert!(f.is_singular());
        assert!(f.det().norm() < 1e-14);
        assert!(matches!(
            f.solve_vec(&[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(LinalgError::Singular { .. })
        ));
    }

    #[test]
    fn det_sign_tracks_row_exchanges() {
        // Permutation matrix for (0 1 2) -> (1 0 2) has det -1.
        let a = Mat::from_vec(
            3,
            3,
            vec![
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        let d = det(&a).unwrap();
        assert!((d - c(-1.0, 0.0)).norm() < 1e-15);
    }
}
