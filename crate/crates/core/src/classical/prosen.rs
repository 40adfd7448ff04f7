//! Complex-point correlation functions as Hafnians.
//!
//! The limiting process restricted to complex points `z_1..z_k` and their
//! conjugates is a centered complex Gaussian whose second moments all come
//! from one generating function `g` and its derivatives: with the extended
//! point list `w = (z_1..z_k, conj(z_1)..conj(z_k))` and
//! `u = w_j * conj(w_l)`,
//!
//! ```text
//! A[j,l] = g(u)                 covariance of values
//! B[j,l] = w_j g'(u)            covariance of values with derivatives
//! C[j,l] = g'(u) + u g''(u)     covariance of derivatives
//! ```
//!
//! Conditioning the derivatives on all values vanishing leaves the Schur
//! complement `M = C - B^H A^-1 B`, and the k-point density of complex
//! zeros is a Gaussian absolute-moment identity in Hafnian form:
//!
//! ```text
//! rho_k = pi^-k (det A)^-1/2 Hf(E),   E[j,l] = M[j, (l + k) mod 2k].
//! ```
//!
//! For the limiting Kac process `g(u) = 1/(1 - u)`; [`Generator`] admits
//! other covariance kernels with the same conditioning structure.

use num_complex::Complex;

use super::{ClassicalError, CONDITION_LIMIT, GENERATOR_MARGIN};
use crate::linalg::{
    cholesky_hermitian, cond_1, hermitian_solve_mat, tri_det_sq, LinalgError, Mat, SymMatrix,
    HAFNIAN_DIM_CAP,
};
use crate::scalar::Real;

/// A generating function's value and first two derivatives at one
/// argument: `(g(u), g'(u), g''(u))`.
pub type GeneratorJet<R> = (Complex<R>, Complex<R>, Complex<R>);

/// Covariance generating function of a Gaussian power series.
pub trait Generator<R: Real> {
    fn eval(&self, u: Complex<R>) -> Result<GeneratorJet<R>, ClassicalError>;
}

/// The limiting Kac generating function `g(u) = 1 / (1 - u)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KacGenerator;

impl<R: Real> Generator<R> for KacGenerator {
    fn eval(&self, u: Complex<R>) -> Result<GeneratorJet<R>, ClassicalError> {
        g_kac(u)
    }
}

/// `1 / (1 - u)` with its first two derivatives.
///
/// The argument must satisfy `|u| < 1 - 1e-12`; products of in-disk points
/// with conjugates always do, and the guard keeps the pole at 1 away. The
/// comparison is written so that a non-finite argument also fails it.
pub fn g_kac<R: Real>(u: Complex<R>) -> Result<GeneratorJet<R>, ClassicalError> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must also land here
    if !(u.norm() < R::of(1.0 - GENERATOR_MARGIN)) {
        return Err(ClassicalError::GeneratorSingularity {
            modulus: u.norm().to_f64().unwrap_or(f64::NAN),
            margin: GENERATOR_MARGIN,
        });
    }
    let inv = (Complex::new(R::one(), R::zero()) - u).inv();
    let g = inv;
    let gp = inv * inv;
    let gpp = gp * inv * R::of(2.0);
    Ok((g, gp, gpp))
}

/// The three covariance blocks of the conjugate-extended Gaussian.
#[derive(Debug, Clone)]
pub struct ProsenMatrices<R: Real> {
    k: usize,
    a: Mat<Complex<R>>,
    b: Mat<Complex<R>>,
    c: Mat<Complex<R>>,
}

impl<R: Real> ProsenMatrices<R> {
    /// Builds the blocks for the limiting Kac process.
    pub fn new(points: &[Complex<R>]) -> Result<Self, ClassicalError> {
        Self::with_generator(points, &KacGenerator)
    }

    /// Builds the blocks for an arbitrary generating function.
    ///
    /// The points must be finite, strictly inside the unit disk, and
    /// pairwise distinct within the conjugate-extended list; a real point
    /// equals its own conjugate and is rejected as coincident.
    pub fn with_generator<G: Generator<R>>(
        points: &[Complex<R>],
        generator: &G,
    ) -> Result<Self, ClassicalError> {
        let k = points.len();
        if k == 0 {
            return Err(ClassicalError::EmptyPointList);
        }
        if 2 * k > HAFNIAN_DIM_CAP {
            return Err(ClassicalError::Linalg(LinalgError::DimensionCap {
                dim: 2 * k,
                cap: HAFNIAN_DIM_CAP,
            }));
        }
        for (index, z) in points.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(ClassicalError::NonFinitePoint { index });
            }
            if z.norm() >= R::one() {
                return Err(ClassicalError::PointOutOfDomain {
                    index,
                    modulus: z.norm().to_f64().unwrap_or(f64::NAN),
                    margin: 0.0,
                });
            }
        }
        let mut extended = Vec::with_capacity(2 * k);
        extended.extend_from_slice(points);
        extended.extend(points.iter().map(|z| z.conj()));
        for i in 0..extended.len() {
            for j in (i + 1)..extended.len() {
                if extended[i] == extended[j] {
                    return Err(ClassicalError::CoincidentPoints { i: i % k, j: j % k });
                }
            }
        }

        let n = 2 * k;
        let mut a = Mat::zeros(n, n);
        let mut b = Mat::zeros(n, n);
        let mut c = Mat::zeros(n, n);
        for j in 0..n {
            for l in 0..n {
                let u = extended[j] * extended[l].conj();
                let (g, gp, gpp) = generator.eval(u)?;
                a[(j, l)] = g;
                b[(j, l)] = extended[j] * gp;
                c[(j, l)] = gp + u * gpp;
            }
        }
        Ok(Self { k, a, b, c })
    }

    /// Number of points (each block has dimension `2k x 2k`).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Covariance of the values.
    pub fn value_block(&self) -> &Mat<Complex<R>> {
        &self.a
    }

    /// Covariance of values with derivatives.
    pub fn cross_block(&self) -> &Mat<Complex<R>> {
        &self.b
    }

    /// Covariance of the derivatives.
    pub fn derivative_block(&self) -> &Mat<Complex<R>> {
        &self.c
    }
}

/// k-point correlation function of complex zeros for the limiting Kac
/// process, via the Hafnian formulation. Supports up to 8 points.
pub fn prosen_rho<R: Real>(points: &[Complex<R>]) -> Result<R, ClassicalError> {
    prosen_rho_with(points, &KacGenerator)
}

/// [`prosen_rho`] for an arbitrary generating function.
pub fn prosen_rho_with<R: Real, G: Generator<R>>(
    points: &[Complex<R>],
    generator: &G,
) -> Result<R, ClassicalError> {
    let blocks = ProsenMatrices::with_generator(points, generator)?;
    let k = blocks.k();
    let n = 2 * k;

    match cond_1(&blocks.a) {
        Ok(cond) => {
            let cond = cond.to_f64().unwrap_or(f64::INFINITY);
            if cond > CONDITION_LIMIT {
                return Err(ClassicalError::NearCoincident {
                    cond,
                    limit: CONDITION_LIMIT,
                });
            }
        }
        Err(LinalgError::Singular { .. }) => {
            return Err(ClassicalError::NearCoincident {
                cond: f64::INFINITY,
                limit: CONDITION_LIMIT,
            });
        }
        Err(other) => return Err(ClassicalError::Linalg(other)),
    }

    let chol = cholesky_hermitian(&blocks.a).map_err(|err| match err {
        LinalgError::NotPositiveDefinite { .. } => ClassicalError::NotPositiveDefinite {
            what: "value covariance",
        },
        other => ClassicalError::Linalg(other),
    })?;
    let solved = hermitian_solve_mat(&chol, &blocks.b);
    let b_adj = blocks.b.transpose().map(|v| v.conj());
    let correction = b_adj.dot(&solved);
    let schur = Mat::from_fn(n, n, |i, j| blocks.c[(i, j)] - correction[(i, j)]);

    // Pair each point's derivative with its conjugate partner's by rotating
    // the columns half a turn; the rotated matrix is complex symmetric.
    let rotated = Mat::from_fn(n, n, |i, j| schur[(i, (j + k) % n)]);
    let sym = SymMatrix::new(rotated)?;
    let hf = sym.hafnian()?;

    let det_a = tri_det_sq((0..n).map(|i| chol[(i, i)].re));
    let scale = R::PI().powi(-(k as i32)) / det_a.sqrt();
    let value = hf * scale;

    let residual = value.im.abs();
    let tol = R::of(1e-10) * R::one().max(value.norm());
    if residual > tol {
        return Err(ClassicalError::ImaginaryResidue {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(value.re)
}
