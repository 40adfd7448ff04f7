//! Hafnian of a complex symmetric matrix: the sum over all perfect
//! matchings of the index set of the product of matched entries. Real
//! matrices embed with zero imaginary part. The main evaluator memoizes
//! over subsets of unmatched indices, which is exact and fast up to the
//! dimension cap; a direct matching enumerator is kept as an independent
//! cross-check.

use num_complex::Complex;

use super::{check_positive_even, LinalgError, Mat};
use crate::scalar::Real;

/// Relative tolerance for the symmetry check in [`SymMatrix::new`].
const SYM_REL_TOL: f64 = 1e-12;

/// Largest dimension the memoized hafnian accepts; the subset table has
/// `2^dim` entries.
pub const HAFNIAN_DIM_CAP: usize = 16;

/// Largest dimension the brute-force enumerator accepts; the number of
/// perfect matchings is `(dim - 1)!!`.
const BRUTE_FORCE_DIM_CAP: usize = 12;

/// A complex symmetric matrix (no conjugation in the symmetry) of
/// positive even dimension, stored exactly symmetrized.
#[derive(Clone, Debug)]
pub struct SymMatrix<R: Real> {
    mat: Mat<Complex<R>>,
}

impl<R: Real> SymMatrix<R> {
    /// Validates that `a` is square with positive even dimension and
    /// symmetric to within `1e-12` of its largest entry, then stores the
    /// exactly symmetrized part.
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
        let tol = R::of(SYM_REL_TOL) * max_abs;
        let mut max_dev = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                max_dev = max_dev.max((a[(i, j)] - a[(j, i)]).norm());
            }
        }
        if max_dev > tol {
            return Err(LinalgError::NotSymmetric {
                max_dev: max_dev.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let half = Complex::new(R::of(0.5), R::zero());
        let mat = Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) * half);
        Ok(Self { mat })
    }

    /// Builds an exactly symmetric matrix from a generator for the upper
    /// triangle including the diagonal. The dimension must be positive and
    /// even.
    pub fn from_upper(
        n: usize,
        mut upper: impl FnMut(usize, usize) -> Complex<R>,
    ) -> Result<Self, LinalgError> {
        check_positive_even(n)?;
        let mut mat = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = upper(i, j);
                mat[(i, j)] = v;
                mat[(j, i)] = v;
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

    /// The hafnian of this matrix; see [`hafnian`].
    pub fn hafnian(&self) -> Result<Complex<R>, LinalgError> {
        hafnian(self)
    }
}

fn check_dim_cap(n: usize, cap: usize) -> Result<(), LinalgError> {
    if n > cap {
        return Err(LinalgError::DimensionCap { dim: n, cap });
    }
    Ok(())
}

/// Hafnian by memoized pairing over index subsets: the sum over perfect
/// matchings of the products of matched entries. The dimension is capped
/// at [`HAFNIAN_DIM_CAP`]. Diagonal entries never enter the result.
pub fn hafnian<R: Real>(a: &SymMatrix<R>) -> Result<Complex<R>, LinalgError> {
    let n = a.dim();
    check_dim_cap(n, HAFNIAN_DIM_CAP)?;

    fn rec<R: Real>(
        mask: usize,
        m: &Mat<Complex<R>>,
        memo: &mut [Option<Complex<R>>],
    ) -> Complex<R> {
        if mask == 0 {
            return Complex::new(R::one(), R::zero());
        }
        if let Some(v) = memo[mask] {
            return v;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut total = Complex::new(R::zero(), R::zero());
        let mut partners = rest;
        while partners != 0 {
            let j = partners.trailing_zeros() as usize;
            partners &= partners - 1;
            total += m[(i, j)] * rec(rest & !(1 << j), m, memo);
        }
        memo[mask] = Some(total);
        total
    }

    let full = (1usize << n) - 1;
    let mut memo = vec![None; 1usize << n];
    Ok(rec(full, a.as_mat(), &mut memo))
}

/// Hafnian by explicit enumeration of every perfect matching. Exponential
/// in the dimension, so it is capped much lower than [`hafnian`]; intended
/// as an independent oracle for the memoized version.
pub fn hafnian_brute_force<R: Real>(a: &SymMatrix<R>) -> Result<Complex<R>, LinalgError> {
    let n = a.dim();
    check_dim_cap(n, BRUTE_FORCE_DIM_CAP)?;

    fn enumerate<R: Real>(free: &[usize], m: &Mat<Complex<R>>) -> Complex<R> {
        if free.is_empty() {
            return Complex::new(R::one(), R::zero());
        }
        let i = free[0];
        let mut total = Complex::new(R::zero(), R::zero());
        for pos in 1..free.len() {
            let j = free[pos];
            let mut remaining: Vec<usize> = free[1..].to_vec();
            remaining.remove(pos - 1);
            total += m[(i, j)] * enumerate(&remaining, m);
        }
        total
    }

    let all: Vec<usize> = (0..n).collect();
    Ok(enumerate(&all, a.as_mat()))
}
