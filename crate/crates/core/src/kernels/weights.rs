//! One-particle weight of the joint eigenvalue density, on the real
//! interval and on the open unit disk.
//!
//! Real axis: `w(x) = c_L (1-x^2)^{L/2-1}` with
//! `c_L = (L/(2 pi) * Gamma(1/2) Gamma((L+1)/2) / Gamma(L/2))^{1/2}`.
//!
//! Complex points: `w(z)^2 = (L(L-1)/(2 pi)) |1-z^2|^{L-2} J(alpha)` with
//! `alpha = 2 |Im z| / |1-z^2|` and `J(alpha)` the area integral
//! `int_{asin alpha}^{pi/2} cos^{L-2}(t) dt`, which vanishes for
//! `alpha >= 1`; at `L = 1` the closed form `(2 pi |1-z^2|)^{-1/2}`
//! applies instead. Both formulas reduce to the real-axis weight as
//! `Im z -> 0`.

use num_complex::Complex;

use super::{KernelError, WeightParams, NEAR_SINGULAR_CUTOFF};
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;
use crate::special::gamma_half_ratio;

/// The normalization `c_L = (L G_L / (2 pi))^{1/2}` with
/// `G_L = Gamma(1/2) Gamma((L+1)/2) / Gamma(L/2)`.
pub(crate) fn c_l<R: Real>(l: u32) -> R {
    let g: R = gamma_half_ratio(l);
    (R::of_usize(l as usize) * g / (R::of(2.0) * R::PI())).sqrt()
}

/// Real-axis weight `w(x) = c_L (1-x^2)^{L/2-1}` for `|x| < 1`.
pub fn weight_w_real<R: Real>(x: R, l: u32) -> Result<R, KernelError> {
    let params = WeightParams::new(l)?;
    if !x.is_finite() {
        return Err(KernelError::NonFinite);
    }
    if x.abs() >= R::one() {
        return Err(KernelError::OutsideDisk {
            what: "real point",
            modulus: x.abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = R::of(0.5);
    let expo = R::of_usize(params.l() as usize) * half - R::one();
    Ok(c_l::<R>(l) * (R::one() - x * x).powf(expo))
}

/// Disk weight `w(z)` for `|z| < 1`; zero when `2 |Im z| >= |1-z^2|`.
pub fn weight_w<R: Real>(z: Complex<R>, l: u32) -> Result<R, KernelError> {
    WeightParams::new(l)?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(KernelError::NonFinite);
    }
    if z.norm() >= R::one() {
        return Err(KernelError::OutsideDisk {
            what: "complex point",
            modulus: z.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    let one = Complex::new(R::one(), R::zero());
    let a = (one - z * z).norm();
    if l == 1 {
        if a < R::of(NEAR_SINGULAR_CUTOFF) {
            return Err(KernelError::NearSingular {
                magnitude: a.to_f64().unwrap_or(f64::NAN),
                cutoff: NEAR_SINGULAR_CUTOFF,
            });
        }
        return Ok((R::of(2.0) * R::PI() * a).sqrt().recip());
    }
    let alpha = R::of(2.0) * z.im.abs() / a;
    if alpha >= R::one() {
        return Ok(R::zero());
    }
    let angle = {
        let lo = alpha.asin();
        let hi = R::PI() * R::of(0.5);
        match l {
            2 => hi - lo,
            3 => R::one() - alpha,
            _ => {
                let p = (l - 2) as i32;
                integrate(|t: R| t.cos().powi(p), lo, hi, &QuadConfig::default())
                    .map_err(KernelError::from_quad)?
                    .value
            }
        }
    };
    let lr = R::of_usize(l as usize);
    let sq = lr * (lr - R::one()) / (R::of(2.0) * R::PI()) * a.powi(l as i32 - 2) * angle;
    Ok(sq.max(R::zero()).sqrt())
}

/// The `sqrt(2)`-scaled weight the kernel sums are written in, for either
/// argument kind.
pub(crate) fn wt_real<R: Real>(x: R, l: u32) -> Result<R, KernelError> {
    Ok(R::of(2.0).sqrt() * weight_w_real(x, l)?)
}

pub(crate) fn wt_complex<R: Real>(z: Complex<R>, l: u32) -> Result<R, KernelError> {
    Ok(R::of(2.0).sqrt() * weight_w(z, l)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn real_weight_matches_frozen_values() {
        // Independent high-precision reference values at x = 0.37; the
        // L=2 weight is x-independent and exactly 1/sqrt(2).
        let want = [
            0.429_417_270_905_940_7,
            std::f64::consts::FRAC_1_SQRT_2,
            0.907_854_497_315_340_3,
        ];
        for (i, w) in want.iter().enumerate() {
            let got = weight_w_real(0.37_f64, (i + 1) as u32).unwrap();
            assert!((got - w).abs() < 1e-15, "L={}: {got} vs {w}", i + 1);
        }
    }

    #[test]
    fn real_weight_simple_points() {
        // L=2 at any x: c_2 = (2/(2 pi) * Gamma(1/2)Gamma(3/2))^{1/2} = sqrt(1/2).
        let got = weight_w_real(0.0_f64, 2).unwrap();
        assert!((got - 0.5_f64.sqrt()).abs() < 1e-15);
        // L=1, x=0.5: (1/(2 pi))^{1/2} (0.75)^{-1/2}.
        let want = (1.0 / (2.0 * std::f64::consts::PI)).sqrt() / 0.75_f64.sqrt();
        assert!((weight_w_real(0.5_f64, 1).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn disk_weight_matches_frozen_values() {
        let z = c(0.2, 0.4);
        let w2 = weight_w(z, 2).unwrap();
        assert!((w2 * w2 - 0.25).abs() < 1e-15, "L=2 squared: {}", w2 * w2);
        let w3 = weight_w(z, 3).unwrap();
        assert!(
            (w3 * w3 - 0.316_435_852_547_429_7).abs() < 1e-15,
            "L=3 squared: {}",
            w3 * w3
        );
        let w1 = weight_w(z, 1).unwrap();
        assert!((w1 - 0.37506589341014176).abs() < 1e-15, "L=1: {w1}");
        // Quadrature branch near the vanishing threshold.
        let w3b = weight_w(c(0.1, 0.62), 3).unwrap();
        assert!((w3b - 0.36561362554539406).abs() < 1e-12, "L=3 quad: {w3b}");
    }

    #[test]
    fn disk_weight_at_zero_and_l1() {
        let got = weight_w(c(0.0, 0.0), 1).unwrap();
        let want = (1.0 / (2.0 * std::f64::consts::PI)).sqrt();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn disk_weight_decays_toward_the_unit_circle() {
        // alpha = 2|y|/|1-z^2| reaches 1 only on the circle itself
        // ((1-x^2-y^2)^2 <= 0 has no interior solutions), so the weight
        // is strictly positive inside and decays to zero at the rim.
        for l in [2u32, 3, 5] {
            let mid = weight_w(c(0.0, 0.5), l).unwrap();
            let near = weight_w(c(0.0, 0.9), l).unwrap();
            let rim = weight_w(c(0.0, 0.9999999), l).unwrap();
            assert!(mid > near && near > rim, "L={l}: {mid} {near} {rim}");
            assert!((0.0..1e-2).contains(&rim), "L={l}: {rim}");
        }
    }

    #[test]
    fn disk_weight_reduces_to_real_weight_on_the_axis() {
        for l in [1u32, 2, 3, 5] {
            for &x in &[-0.8, -0.3, 0.0, 0.45, 0.9] {
                let via_disk = weight_w(c(x, 0.0), l).unwrap();
                let via_axis = weight_w_real(x, l).unwrap();
                assert!(
                    (via_disk - via_axis).abs() < 1e-10 * via_axis.max(1.0),
                    "L={l} x={x}: {via_disk} vs {via_axis}"
                );
            }
        }
    }

    #[test]
    fn domain_violations_are_rejected() {
        assert!(matches!(
            weight_w_real(1.0_f64, 1),
            Err(KernelError::OutsideDisk { .. })
        ));
        assert!(matches!(
            weight_w(c(0.8, 0.7), 2),
            Err(KernelError::OutsideDisk { .. })
        ));
        assert!(matches!(weight_w(c(0.0, 0.0), 0), Err(KernelError::BadOrder { l: 0 })));
    }

    #[test]
    fn f32_instantiation_tracks_f64() {
        let w32 = weight_w_real(0.37_f32, 3).unwrap();
        assert!((w32 as f64 - 0.907_854_497_315_340_3).abs() < 1e-5);
        let z32 = Complex::new(0.2_f32, 0.4_f32);
        let w = weight_w(z32, 2).unwrap();
        assert!((w as f64 * w as f64 - 0.25).abs() < 1e-5);
    }
}
