//! Correlation functions of any order as Pfaffians of the assembled
//! block kernel matrix, plus low-order closed forms used as cross-checks.
//!
//! For points `u_1 .. u_n` (real and upper-half-disk mixed freely) the
//! `2n x 2n` matrix with `2x2` blocks
//!
//! ```text
//! B(a, b) = [ D(u_a, u_b)      S(u_a, u_b)      ]
//!           [ -S(u_b, u_a)     Itilde(u_a, u_b) ]
//! ```
//!
//! is skew-symmetric, and the `n`-point correlation density is its
//! Pfaffian. A real point contributes a factor per unit length, a complex
//! point a factor per unit area.

use num_complex::Complex;

use super::{KernelArg, KernelError, KernelSet, WeightParams, ASSEMBLY_TOL};
use crate::linalg::{pfaffian, Mat, SkewMatrix};
use crate::scalar::Real;
use crate::special::gamma_half_ratio;

/// A validated list of pairwise-distinct correlation points.
#[derive(Clone, Debug)]
pub struct PointConfig<R: Real> {
    args: Vec<KernelArg<R>>,
}

impl<R: Real> PointConfig<R> {
    /// Real points first, then upper-half-disk points. Every point is
    /// domain-checked and the combined list must be pairwise distinct.
    pub fn new(reals: &[R], uppers: &[Complex<R>]) -> Result<Self, KernelError> {
        let mut args = Vec::with_capacity(reals.len() + uppers.len());
        args.extend(reals.iter().map(|&x| KernelArg::Real(x)));
        args.extend(uppers.iter().map(|&z| KernelArg::Complex(z)));
        for arg in &args {
            arg.validate()?;
        }
        for i in 0..args.len() {
            for j in i + 1..args.len() {
                if args[i].value() == args[j].value() {
                    return Err(KernelError::CoincidentPoints { i, j });
                }
            }
        }
        Ok(PointConfig { args })
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn args(&self) -> &[KernelArg<R>] {
        &self.args
    }
}

/// The correlation density at the configured points, as the Pfaffian of
/// the assembled block matrix. The assembly is verified to be
/// skew-symmetric and the Pfaffian to be real up to roundoff; violations
/// of either signal an internal inconsistency and are reported as errors.
pub fn rho_pfaffian<R: Real>(
    kernels: &KernelSet<R>,
    points: &PointConfig<R>,
) -> Result<R, KernelError> {
    let n = points.len();
    if n == 0 {
        // The empty Pfaffian is 1 by convention.
        return Ok(R::one());
    }
    let dim = 2 * n;
    let mut k = Mat::<Complex<R>>::zeros(dim, dim);
    for a in 0..n {
        for b in 0..n {
            let (ua, ub) = (points.args[a], points.args[b]);
            let s_ab = kernels.s(ua, ub)?;
            k[(2 * a, 2 * b)] = kernels.d(ua, ub)?;
            k[(2 * a, 2 * b + 1)] = s_ab;
            k[(2 * b + 1, 2 * a)] = -s_ab;
            k[(2 * a + 1, 2 * b + 1)] = kernels.i_tilde(ua, ub)?;
        }
    }

    let mut max_entry = R::zero();
    let mut residual = R::zero();
    for i in 0..dim {
        for j in i..dim {
            max_entry = max_entry.max(k[(i, j)].norm()).max(k[(j, i)].norm());
            residual = residual.max((k[(i, j)] + k[(j, i)]).norm());
        }
    }
    if residual > R::of(ASSEMBLY_TOL) * max_entry {
        return Err(KernelError::Inconsistent {
            what: "assembled kernel matrix skew-symmetry",
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: (R::of(ASSEMBLY_TOL) * max_entry).to_f64().unwrap_or(f64::NAN),
        });
    }

    let skew = SkewMatrix::from_upper(dim, |i, j| k[(i, j)])
        .expect("dimension is positive and even by construction");
    let pf = pfaffian(&skew);
    let scale = pf.norm().max(R::one());
    if pf.im.abs() > R::of(1e-10) * scale {
        return Err(KernelError::Inconsistent {
            what: "imaginary part of the correlation Pfaffian",
            residual: pf.im.abs().to_f64().unwrap_or(f64::NAN),
            tol: (R::of(1e-10) * scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(pf.re)
}

/// One-point real density `G_L / (pi (1 - x^2))`, every order.
pub fn rho1_real_closed<R: Real>(l: u32, x: R) -> Result<R, KernelError> {
    WeightParams::new(l)?;
    KernelArg::Real(x).validate()?;
    Ok(gamma_half_ratio::<R>(l) / (R::PI() * (R::one() - x * x)))
}

/// Two-point real density at order 1 in closed form.
pub fn rho2_real_closed<R: Real>(x1: R, x2: R) -> Result<R, KernelError> {
    KernelArg::Real(x1).validate()?;
    KernelArg::Real(x2).validate()?;
    let t = R::one() - x1 * x2;
    // The two one-point factors enter only through their product, which
    // commutes bitwise; this keeps the function exactly symmetric.
    let pp = (R::one() - x1 * x1) * (R::one() - x2 * x2);
    let d = x1 - x2;
    let pi2 = R::PI() * R::PI();
    let first = d * d / (pi2 * t * t * pp);
    let root = pp.sqrt();
    let a = (root / t).min(R::one());
    let second = d.abs() * a.asin() / (pi2 * t * t * root);
    Ok(first + second)
}

/// One-point density per unit area for an upper-half-disk point at
/// order 1 in closed form.
pub fn rho1_complex_closed<R: Real>(z: Complex<R>) -> Result<R, KernelError> {
    KernelArg::Complex(z).validate()?;
    let one = Complex::new(R::one(), R::zero());
    let a = (one - z * z).norm();
    let r2 = R::one() - z.norm_sqr();
    Ok(R::of(2.0) * z.im / (R::PI() * a * r2 * r2))
}
