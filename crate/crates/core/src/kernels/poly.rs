//! The monic skew-orthogonal polynomials `p_j`, their weighted versions
//! `q_j = sqrt(2) w p_j`, and the transformed family `tau_j` that enters
//! the `Itilde` kernel.
//!
//! For real arguments `tau_j(u) = -(1/sqrt(2)) int_{-1}^{1} sgn(u-t)
//! q_j(t) dt`, which collapses to closed forms: odd indices integrate
//! exactly, and even indices reduce (via `t = sin(theta)`) to the moments
//! `I_n(phi) = int_0^phi cos^{L-1}(t) sin^{2n}(t) dt`, generated stably by
//! a forward recurrence from a single base integral. For an upper-half-disk
//! argument `z`, `tau_j(z) = i q_j(conj z)`.

use num_complex::Complex;

use super::weights::{c_l, wt_complex, wt_real};
use super::KernelError;
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;

/// Coefficients (ascending powers) of the monic degree-`j` polynomial:
/// even `j` gives `x^j`; odd `j` gives `x^j - ((j-1)/(L+j-1)) x^{j-2}`
/// (so `p_1 = x`).
pub fn skew_poly<R: Real>(j: u32, l: u32) -> Result<Vec<R>, KernelError> {
    if l < 1 {
        return Err(KernelError::BadOrder { l });
    }
    let deg = j as usize;
    let mut coeffs = vec![R::zero(); deg + 1];
    coeffs[deg] = R::one();
    if j % 2 == 1 && j >= 3 {
        let num = R::of_usize((j - 1) as usize);
        let den = R::of_usize((l + j - 1) as usize);
        coeffs[deg - 2] = -(num / den);
    }
    Ok(coeffs)
}

/// Evaluates `p_j` at a complex point without materializing coefficients.
pub(crate) fn eval_p<R: Real>(j: u32, l: u32, u: Complex<R>) -> Complex<R> {
    let uj = u.powi(j as i32);
    if j.is_multiple_of(2) || j == 1 {
        uj
    } else {
        let ratio = R::of_usize((j - 1) as usize) / R::of_usize((l + j - 1) as usize);
        uj - u.powi(j as i32 - 2) * ratio
    }
}

pub(crate) fn eval_p_real<R: Real>(j: u32, l: u32, x: R) -> R {
    let xj = x.powi(j as i32);
    if j.is_multiple_of(2) || j == 1 {
        xj
    } else {
        let ratio = R::of_usize((j - 1) as usize) / R::of_usize((l + j - 1) as usize);
        xj - ratio * x.powi(j as i32 - 2)
    }
}

/// Base angular moment `I_0(phi) = int_0^phi cos^{L-1}(t) dt`, closed for
/// `L <= 3`, adaptive quadrature above.
fn base_moment<R: Real>(l: u32, phi: R) -> Result<R, KernelError> {
    match l {
        1 => Ok(phi),
        2 => Ok(phi.sin()),
        3 => Ok((phi + phi.sin() * phi.cos()) * R::of(0.5)),
        _ => {
            let p = (l - 1) as i32;
            Ok(
                integrate(|t: R| t.cos().powi(p), R::zero(), phi, &QuadConfig::default())
                    .map_err(KernelError::from_quad)?
                    .value,
            )
        }
    }
}

/// The moments `I_n(phi) = int_0^phi cos^{L-1}(t) sin^{2n}(t) dt` for
/// `n = 0..count`, by the forward recurrence
/// `(L+2n-1) I_n = (2n-1) I_{n-1} - sin^{2n-1}(phi) cos^L(phi)`.
/// The recurrence keeps the absolute error at the level of the base
/// integral, which is what the kernel partial sums need.
fn angular_moments<R: Real>(l: u32, phi: R, count: usize) -> Result<Vec<R>, KernelError> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    out.push(base_moment(l, phi)?);
    let (s, c) = (phi.sin(), phi.cos());
    let cl = c.powi(l as i32);
    // sin^{2n-1}(phi), maintained incrementally.
    let mut s_odd = s;
    for n in 1..count {
        let nr = R::of_usize(n);
        let two_n_minus_1 = nr + nr - R::one();
        let denom = R::of_usize(l as usize) + two_n_minus_1;
        let prev = out[n - 1];
        out.push((two_n_minus_1 * prev - s_odd * cl) / denom);
        s_odd = s_odd * s * s;
    }
    Ok(out)
}

/// `tau_{2n+1}(x) = sqrt(2) c_L / (L+2n) * (1-x^2)^{L/2} x^{2n}`.
pub fn tau_odd<R: Real>(n: u32, l: u32, x: R) -> Result<R, KernelError> {
    if l < 1 {
        return Err(KernelError::BadOrder { l });
    }
    let half_l = R::of_usize(l as usize) * R::of(0.5);
    let pre = R::of(2.0).sqrt() * c_l::<R>(l) / R::of_usize((l + 2 * n) as usize);
    Ok(pre * (R::one() - x * x).powf(half_l) * x.powi(2 * n as i32))
}

/// `tau_{2n}(x) = -sqrt(2) c_L I_n(asin x)` (odd in `x`, zero at `x = 0`).
pub fn tau_even<R: Real>(n: u32, l: u32, x: R) -> Result<R, KernelError> {
    if l < 1 {
        return Err(KernelError::BadOrder { l });
    }
    let sign = if x < R::zero() { -R::one() } else { R::one() };
    let phi = x.abs().asin();
    let moments = angular_moments(l, phi, n as usize + 1)?;
    Ok(-sign * R::of(2.0).sqrt() * c_l::<R>(l) * moments[n as usize])
}

/// All `q_j` and `tau_j` values for `j = 0..m` at one argument, used by
/// the finite kernel partial sums. Entries are complex to cover both
/// argument kinds uniformly.
pub(crate) struct SeriesTerms<R: Real> {
    pub q: Vec<Complex<R>>,
    pub tau: Vec<Complex<R>>,
}

pub(crate) fn series_terms_real<R: Real>(
    l: u32,
    m: usize,
    x: R,
) -> Result<SeriesTerms<R>, KernelError> {
    let wt = wt_real(x, l)?;
    let sign = if x < R::zero() { -R::one() } else { R::one() };
    let phi = x.abs().asin();
    let moments = angular_moments(l, phi, m / 2)?;
    let sqrt2_cl = R::of(2.0).sqrt() * c_l::<R>(l);
    let one_minus = (R::one() - x * x).powf(R::of_usize(l as usize) * R::of(0.5));

    let mut q = Vec::with_capacity(m);
    let mut tau = Vec::with_capacity(m);
    let mut x_even = R::one(); // x^{2n} maintained incrementally
    for (n, &moment) in moments.iter().enumerate().take(m / 2) {
        let j_even = 2 * n as u32;
        let j_odd = j_even + 1;
        q.push((wt * eval_p_real(j_even, l, x)).into_complex());
        q.push((wt * eval_p_real(j_odd, l, x)).into_complex());
        tau.push((-sign * sqrt2_cl * moment).into_complex());
        let tau_odd_val = sqrt2_cl / R::of_usize((l + j_even) as usize) * one_minus * x_even;
        tau.push(tau_odd_val.into_complex());
        x_even = x_even * x * x;
    }
    Ok(SeriesTerms { q, tau })
}

pub(crate) fn series_terms_complex<R: Real>(
    l: u32,
    m: usize,
    z: Complex<R>,
) -> Result<SeriesTerms<R>, KernelError> {
    let wt = wt_complex(z, l)?;
    let zb = z.conj();
    let i_wt = Complex::new(R::zero(), wt);
    let mut q = Vec::with_capacity(m);
    let mut tau = Vec::with_capacity(m);
    for j in 0..m as u32 {
        q.push(eval_p(j, l, z) * wt);
        tau.push(eval_p(j, l, zb) * i_wt);
    }
    Ok(SeriesTerms { q, tau })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lists_match_the_display() {
        let p0: Vec<f64> = skew_poly(0, 1).unwrap();
        assert_eq!(p0, vec![1.0]);
        let p1: Vec<f64> = skew_poly(1, 5).unwrap();
        assert_eq!(p1, vec![0.0, 1.0]);
        let p3: Vec<f64> = skew_poly(3, 1).unwrap();
        assert_eq!(p3, vec![0.0, -2.0 / 3.0, 0.0, 1.0]);
        let p4: Vec<f64> = skew_poly(4, 2).unwrap();
        assert_eq!(p4, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn tau_values_match_independent_quadrature_references() {
        // Frozen values of tau_j(0.37) from a high-precision oracle that
        // integrates the defining sgn-kernel directly.
        let cases: [(u32, u32, f64); 6] = [
            (1, 0, -0.213832941547),
            (1, 1, 0.52415003841),
            (1, 2, -0.00994871366779),
            (1, 3, 0.0239187134194),
            (1, 4, -0.000824092276948),
            (1, 5, 0.00196468312027),
        ];
        for &(l, j, want) in &cases {
            let got = if j % 2 == 0 {
                tau_even(j / 2, l, 0.37_f64).unwrap()
            } else {
                tau_odd((j - 1) / 2, l, 0.37_f64).unwrap()
            };
            assert!(
                (got - want).abs() < 1e-11 * want.abs().max(1e-3),
                "L={l} j={j}: {got} vs {want}"
            );
        }
        // L=2: the leading even tau is exactly -x.
        assert!((tau_even(0, 2, 0.37_f64).unwrap() + 0.37).abs() < 1e-15);
        let l2: [(u32, f64); 5] = [
            (1, 0.43155),
            (2, -0.0168843333333),
            (3, 0.0295395975),
            (4, -0.00138687914),
            (5, 0.0026959805985),
        ];
        for &(j, want) in &l2 {
            let got = if j % 2 == 0 {
                tau_even(j / 2, 2, 0.37_f64).unwrap()
            } else {
                tau_odd((j - 1) / 2, 2, 0.37_f64).unwrap()
            };
            assert!(
                (got - want).abs() < 1e-11 * want.abs().max(1e-3),
                "L=2 j={j}: {got} vs {want}"
            );
        }
        let l3 = [(0u32, -0.499412324906), (1, 0.369378071073)];
        for &(j, want) in &l3 {
            let got = if j % 2 == 0 {
                tau_even(j / 2, 3, 0.37_f64).unwrap()
            } else {
                tau_odd((j - 1) / 2, 3, 0.37_f64).unwrap()
            };
            assert!((got - want).abs() < 1e-11, "L=3 j={j}: {got} vs {want}");
        }
    }

    #[test]
    fn even_tau_is_odd_in_its_argument_and_zero_at_zero() {
        for l in [1u32, 2, 3] {
            for n in 0..4u32 {
                assert_eq!(tau_even(n, l, 0.0_f64).unwrap(), 0.0);
                let plus = tau_even(n, l, 0.61_f64).unwrap();
                let minus = tau_even(n, l, -0.61_f64).unwrap();
                assert_eq!(plus, -minus, "bitwise odd symmetry L={l} n={n}");
            }
        }
    }

    #[test]
    fn moment_recurrence_matches_direct_quadrature() {
        for l in [1u32, 2, 3, 5] {
            let phi = 0.93_f64.asin();
            let moments = angular_moments(l, phi, 12).unwrap();
            for (n, got) in moments.iter().enumerate() {
                let p = (l - 1) as i32;
                let want = integrate(
                    |t: f64| t.cos().powi(p) * t.sin().powi(2 * n as i32),
                    0.0,
                    phi,
                    &QuadConfig::default(),
                )
                .unwrap()
                .value;
                assert!(
                    (got - want).abs() < 1e-13,
                    "L={l} n={n}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn complex_series_terms_are_the_weighted_conjugate_polynomials() {
        let z = Complex::new(0.2_f64, 0.4);
        let terms = series_terms_complex(2, 6, z).unwrap();
        let wt = wt_complex(z, 2).unwrap();
        for j in 0..6u32 {
            let want_q = eval_p(j, 2, z) * wt;
            let want_tau = eval_p(j, 2, z.conj()) * Complex::new(0.0, wt);
            assert!((terms.q[j as usize] - want_q).norm() < 1e-15);
            assert!((terms.tau[j as usize] - want_tau).norm() < 1e-15);
        }
    }

    #[test]
    fn real_series_terms_match_the_scalar_evaluators() {
        let x = -0.53_f64;
        for l in [1u32, 3] {
            let terms = series_terms_real(l, 8, x).unwrap();
            let wt = wt_real(x, l).unwrap();
            for j in 0..8u32 {
                let want_q = wt * eval_p_real(j, l, x);
                let want_tau = if j % 2 == 0 {
                    tau_even(j / 2, l, x).unwrap()
                } else {
                    tau_odd((j - 1) / 2, l, x).unwrap()
                };
                assert!(
                    (terms.q[j as usize].re - want_q).abs() < 1e-14,
                    "q L={l} j={j}"
                );
                assert!(
                    (terms.tau[j as usize].re - want_tau).abs() < 1e-14,
                    "tau L={l} j={j}: {} vs {want_tau}",
                    terms.tau[j as usize].re
                );
                assert_eq!(terms.q[j as usize].im, 0.0);
                assert_eq!(terms.tau[j as usize].im, 0.0);
            }
        }
    }
}
