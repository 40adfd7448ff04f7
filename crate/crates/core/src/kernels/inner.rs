//! The skew-symmetric inner product that the polynomial family is
//! orthogonal under. For real-coefficient polynomials `g1`, `g2` it is
//! the sum of a real-axis part and a disk part:
//!
//! * real: `int int sgn(y - x) h1(x) h2(y) dx dy` with
//!   `h_i = w(x) g_i(x)`, evaluated after `x = sin(t)` (which turns the
//!   weight into the smooth `c_L cos^{L-1} t`) as
//!   `int h1(t) (H2(pi/2) - 2 H2(t)) dt`, `H2` the running integral of
//!   `h2`;
//! * disk: `-4 int_{upper half disk} w(z)^2 Im(g1(z) conj(g2(z))) dA`,
//!   in polar coordinates as a nested adaptive integral.
//!
//! Against this product the monic family satisfies
//! `<p_{2j}, p_{2k+1}> = delta_{jk} r_j` with
//! `r_j = L! (2j)! / (L + 2j)!`, and all even-even and odd-odd products
//! vanish.

use num_complex::Complex;

use super::weights::{c_l, weight_w};
use super::{KernelError, WeightParams};
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;

fn horner_real<R: Real>(coeffs: &[R], x: R) -> R {
    let mut acc = R::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn horner_complex<R: Real>(coeffs: &[R], z: Complex<R>) -> Complex<R> {
    let mut acc = Complex::new(R::zero(), R::zero());
    for &c in coeffs.iter().rev() {
        acc = acc * z + Complex::new(c, R::zero());
    }
    acc
}

fn real_half<R: Real>(a: &[R], b: &[R], l: u32) -> Result<R, KernelError> {
    let cl = c_l::<R>(l);
    let p = (l - 1) as i32;
    let half_pi = R::PI() * R::of(0.5);
    let cfg = QuadConfig::default();
    let h1 = |t: R| cl * t.cos().powi(p) * horner_real(a, t.sin());
    let h2 = |t: R| cl * t.cos().powi(p) * horner_real(b, t.sin());
    let h2_total = integrate(h2, -half_pi, half_pi, &cfg)
        .map_err(KernelError::from_quad)?
        .value;
    let outer = |t: R| {
        // A failed inner integral surfaces as NaN, which the outer rule
        // reports as a non-finite integrand.
        let running = match integrate(h2, -half_pi, t, &cfg) {
            Ok(o) => o.value,
            Err(_) => R::nan(),
        };
        h1(t) * (h2_total - running - running)
    };
    Ok(integrate(outer, -half_pi, half_pi, &cfg)
        .map_err(KernelError::from_quad)?
        .value)
}

fn disk_half<R: Real>(a: &[R], b: &[R], l: u32) -> Result<R, KernelError> {
    let cfg = QuadConfig::default().with_tols(R::of(1e-10), R::of(1e-8));
    let along_ray = |theta: R| -> R {
        let (s, c) = (theta.sin(), theta.cos());
        let f = |r: R| {
            let z = Complex::new(r * c, r * s);
            let w = match weight_w(z, l) {
                Ok(w) => w,
                Err(_) => return R::nan(),
            };
            if w == R::zero() {
                return R::zero();
            }
            let cross = horner_complex(a, z) * horner_complex(b, z).conj();
            R::of(-4.0) * w * w * cross.im * r
        };
        match integrate(f, R::zero(), R::one(), &cfg) {
            Ok(o) => o.value,
            Err(_) => R::nan(),
        }
    };
    Ok(integrate(along_ray, R::zero(), R::PI(), &cfg)
        .map_err(KernelError::from_quad)?
        .value)
}

/// The skew product of two real-coefficient polynomials given by their
/// ascending coefficient lists.
pub fn skew_inner_product<R: Real>(
    coeffs_a: &[R],
    coeffs_b: &[R],
    l: u32,
) -> Result<R, KernelError> {
    WeightParams::new(l)?;
    if coeffs_a.iter().chain(coeffs_b).any(|c| !c.is_finite()) {
        return Err(KernelError::NonFinite);
    }
    if coeffs_a.is_empty() || coeffs_b.is_empty() {
        return Ok(R::zero());
    }
    Ok(real_half(coeffs_a, coeffs_b, l)? + disk_half(coeffs_a, coeffs_b, l)?)
}
