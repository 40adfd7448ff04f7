//! Closed forms of the kernels in the infinite-truncation limit.
//!
//! With `wt` the `sqrt(2)`-scaled weight and `G_L` the half-integer Gamma
//! ratio, the limits of the partial sums are
//!
//! * `S(x, y)   = (G_L/pi) (1-x^2)^{L/2-1} (1-y^2)^{L/2} / (1-xy)^L`,
//!   and the same expression with `wt(z)` replacing the first weight
//!   factor when the first argument is complex,
//! * `D(u, v)   = -wt(u) wt(v) (u - v) / (1 - uv)^{L+1}` for any kinds,
//! * `S(z1, z2) = -i wt(z1) wt(z2) (z1 - conj z2) / (1 - z1 conj z2)^{L+1}`,
//! * `Itilde(z1, z2) = wt(z1) wt(z2) (conj z1 - conj z2)
//!   / (1 - conj z1 conj z2)^{L+1}`,
//! * `Itilde(x, y) = int_x^y S(u, y) du + sgn(x - y)/2`,
//! * `S(x, z) = i D(x, conj z)`, `Itilde(z, x) = i conj(S(z, x))`,
//!   `Itilde(x, z) = -i conj(S(z, x))`.
//!
//! The real-real `Itilde` integral is evaluated with the larger endpoint
//! as the fixed kernel argument, which is permitted because the integral
//! takes the same value with either endpoint fixed; together with the
//! explicit sign factor this makes the result exactly antisymmetric.

use num_complex::Complex;

use super::weights::{wt_complex, wt_real};
use super::{KernelArg, KernelError, NEAR_SINGULAR_CUTOFF};
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;
use crate::special::gamma_half_ratio;

/// The four mixed-kind kernels at a complex/real argument pair.
#[derive(Clone, Copy, Debug)]
pub struct CrossKernels<R: Real> {
    /// `S(z, x)`.
    pub s_cr: Complex<R>,
    /// `S(x, z)`.
    pub s_rc: Complex<R>,
    /// `Itilde(z, x)`.
    pub i_cr: Complex<R>,
    /// `Itilde(x, z)`.
    pub i_rc: Complex<R>,
}

fn wt_arg<R: Real>(u: KernelArg<R>, l: u32) -> Result<R, KernelError> {
    match u {
        KernelArg::Real(x) => wt_real(x, l),
        KernelArg::Complex(z) => wt_complex(z, l),
    }
}

fn guarded_power<R: Real>(base: Complex<R>, exp: i32) -> Result<Complex<R>, KernelError> {
    let mag = base.norm();
    if mag < R::of(NEAR_SINGULAR_CUTOFF) {
        return Err(KernelError::NearSingular {
            magnitude: mag.to_f64().unwrap_or(f64::NAN),
            cutoff: NEAR_SINGULAR_CUTOFF,
        });
    }
    Ok(base.powi(exp))
}

/// Unvalidated real-real `S`, shared with the `Itilde` quadrature.
fn s_rr_raw<R: Real>(l: u32, x: R, y: R) -> R {
    let g: R = gamma_half_ratio(l);
    let half_l = R::of_usize(l as usize) * R::of(0.5);
    g / R::PI()
        * (R::one() - x * x).powf(half_l - R::one())
        * (R::one() - y * y).powf(half_l)
        / (R::one() - x * y).powi(l as i32)
}

/// Limiting `S` for two real points.
pub fn limit_s_rr<R: Real>(l: u32, x: R, y: R) -> Result<R, KernelError> {
    KernelArg::Real(x).validate()?;
    KernelArg::Real(y).validate()?;
    super::WeightParams::new(l)?;
    Ok(s_rr_raw(l, x, y))
}

/// Limiting `D` for any combination of argument kinds.
pub fn limit_d<R: Real>(
    l: u32,
    u: KernelArg<R>,
    v: KernelArg<R>,
) -> Result<Complex<R>, KernelError> {
    u.validate()?;
    v.validate()?;
    let pre = wt_arg(u, l)? * wt_arg(v, l)?;
    let (uu, vv) = (u.value(), v.value());
    let one = Complex::new(R::one(), R::zero());
    let den = guarded_power(one - uu * vv, l as i32 + 1)?;
    Ok(-((uu - vv) / den * pre))
}

/// Limiting `S` for two complex points.
pub fn limit_s_cc<R: Real>(
    l: u32,
    z1: Complex<R>,
    z2: Complex<R>,
) -> Result<Complex<R>, KernelError> {
    KernelArg::Complex(z1).validate()?;
    KernelArg::Complex(z2).validate()?;
    let pre = wt_complex(z1, l)? * wt_complex(z2, l)?;
    let one = Complex::new(R::one(), R::zero());
    let den = guarded_power(one - z1 * z2.conj(), l as i32 + 1)?;
    let ratio = (z1 - z2.conj()) / den * pre;
    // -i * ratio, written out so the components stay exact negations
    // under argument exchange.
    Ok(Complex::new(ratio.im, -ratio.re))
}

/// Limiting `Itilde` for two complex points.
pub fn limit_i_cc<R: Real>(
    l: u32,
    z1: Complex<R>,
    z2: Complex<R>,
) -> Result<Complex<R>, KernelError> {
    KernelArg::Complex(z1).validate()?;
    KernelArg::Complex(z2).validate()?;
    let pre = wt_complex(z1, l)? * wt_complex(z2, l)?;
    let (b1, b2) = (z1.conj(), z2.conj());
    let one = Complex::new(R::one(), R::zero());
    let den = guarded_power(one - b1 * b2, l as i32 + 1)?;
    Ok((b1 - b2) / den * pre)
}

/// Limiting `Itilde` for two real points: the closed arcsine form at
/// `L = 1`, quadrature otherwise.
pub fn limit_i_rr<R: Real>(l: u32, x: R, y: R) -> Result<R, KernelError> {
    KernelArg::Real(x).validate()?;
    KernelArg::Real(y).validate()?;
    super::WeightParams::new(l)?;
    if x == y {
        return Ok(R::zero());
    }
    if l == 1 {
        let num = ((R::one() - x * x) * (R::one() - y * y)).sqrt();
        let a = (num / (R::one() - x * y)).min(R::one());
        let sign = if x > y { R::one() } else { -R::one() };
        return Ok(sign * a.asin() / R::PI());
    }
    limit_i_rr_quadrature(l, x, y)
}

/// Quadrature evaluation of the real-real `Itilde`, available at every
/// order as a cross-check of the `L = 1` closed form.
pub fn limit_i_rr_quadrature<R: Real>(l: u32, x: R, y: R) -> Result<R, KernelError> {
    KernelArg::Real(x).validate()?;
    KernelArg::Real(y).validate()?;
    super::WeightParams::new(l)?;
    if x == y {
        return Ok(R::zero());
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let tail = integrate(
        |u: R| s_rr_raw(l, u, hi),
        lo,
        hi,
        &QuadConfig::default(),
    )
    .map_err(KernelError::from_quad)?
    .value;
    let sign = if x > y { R::one() } else { -R::one() };
    Ok(sign * (R::of(0.5) - tail))
}

/// All four mixed-kind kernels at `(z, x)`.
pub fn limit_cross<R: Real>(
    l: u32,
    z: Complex<R>,
    x: R,
) -> Result<CrossKernels<R>, KernelError> {
    KernelArg::Complex(z).validate()?;
    KernelArg::Real(x).validate()?;
    let one = Complex::new(R::one(), R::zero());
    let g: R = gamma_half_ratio(l);
    let half_l = R::of_usize(l as usize) * R::of(0.5);

    // S(z, x): the real-real form with the first weight factor replaced.
    let lead = wt_complex(z, l)? * (g / (R::PI() * R::of_usize(l as usize))).sqrt();
    let den_s = guarded_power(one - z * x, l as i32)?;
    let s_cr = Complex::new(lead * (R::one() - x * x).powf(half_l), R::zero()) / den_s;

    // S(x, z) = i D(x, conj z).
    let pre = wt_real(x, l)? * wt_complex(z, l)?;
    let zb = z.conj();
    let den_d = guarded_power(one - zb * x, l as i32 + 1)?;
    let d_x_zb = -((Complex::new(x, R::zero()) - zb) / den_d * pre);
    let s_rc = Complex::new(-d_x_zb.im, d_x_zb.re);

    // Itilde(z, x) = i conj(S(z, x)); Itilde(x, z) is its exact negation.
    let i_cr = Complex::new(s_cr.im, s_cr.re);
    let i_rc = -i_cr;
    Ok(CrossKernels {
        s_cr,
        s_rc,
        i_cr,
        i_rc,
    })
}

pub(super) fn s_dispatch<R: Real>(
    l: u32,
    u: KernelArg<R>,
    v: KernelArg<R>,
) -> Result<Complex<R>, KernelError> {
    match (u, v) {
        (KernelArg::Real(x), KernelArg::Real(y)) => {
            Ok(limit_s_rr(l, x, y)?.into_complex())
        }
        (KernelArg::Complex(z), KernelArg::Real(x)) => Ok(limit_cross(l, z, x)?.s_cr),
        (KernelArg::Real(x), KernelArg::Complex(z)) => Ok(limit_cross(l, z, x)?.s_rc),
        (KernelArg::Complex(z1), KernelArg::Complex(z2)) => limit_s_cc(l, z1, z2),
    }
}

pub(super) fn i_dispatch<R: Real>(
    l: u32,
    u: KernelArg<R>,
    v: KernelArg<R>,
) -> Result<Complex<R>, KernelError> {
    match (u, v) {
        (KernelArg::Real(x), KernelArg::Real(y)) => {
            Ok(limit_i_rr(l, x, y)?.into_complex())
        }
        (KernelArg::Complex(z), KernelArg::Real(x)) => Ok(limit_cross(l, z, x)?.i_cr),
        (KernelArg::Real(x), KernelArg::Complex(z)) => Ok(limit_cross(l, z, x)?.i_rc),
        (KernelArg::Complex(z1), KernelArg::Complex(z2)) => limit_i_cc(l, z1, z2),
    }
}
