//! Partial-sum kernels of the `M`-truncated process.
//!
//! Each kernel is a sum over the first `M/2` skew-orthogonal pairs with
//! weights `1/r_j`:
//!
//! * `S(u, v)   = sum_j (1/r_j) [ q_{2j}(u) tau_{2j+1}(v) - q_{2j+1}(u) tau_{2j}(v) ]`
//! * `D(u, v)   = sum_j (1/r_j) [ q_{2j}(u) q_{2j+1}(v)   - q_{2j+1}(u) q_{2j}(v)   ]`
//! * `Itilde(u, v) = sum_j (1/r_j) [ tau_{2j}(u) tau_{2j+1}(v) - tau_{2j+1}(u) tau_{2j}(v) ]
//!   + eps(u, v)`
//!
//! where `eps` is `sgn(x - y)/2` when both arguments are real and zero
//! otherwise. The same expressions cover every argument-kind combination
//! because `q` and `tau` are defined for both kinds.

use num_complex::Complex;

use super::poly::{series_terms_complex, series_terms_real, SeriesTerms};
use super::{KernelArg, KernelError};
use crate::scalar::Real;
use crate::special::factorial_ratio;

fn series_terms<R: Real>(
    l: u32,
    m: usize,
    arg: KernelArg<R>,
) -> Result<SeriesTerms<R>, KernelError> {
    match arg {
        KernelArg::Real(x) => series_terms_real(l, m, x),
        KernelArg::Complex(z) => series_terms_complex(l, m, z),
    }
}

/// `sum_j (1/r_j) (a_{2j} b_{2j+1} - a_{2j+1} b_{2j})`.
fn paired_sum<R: Real>(l: u32, a: &[Complex<R>], b: &[Complex<R>]) -> Complex<R> {
    let mut acc = Complex::new(R::zero(), R::zero());
    for j in 0..a.len() / 2 {
        let inv_r: R = factorial_ratio(l, 2 * j as u32);
        acc += (a[2 * j] * b[2 * j + 1] - a[2 * j + 1] * b[2 * j]) * inv_r;
    }
    acc
}

pub(super) fn s_finite<R: Real>(
    l: u32,
    m: usize,
    u: KernelArg<R>,
    v: KernelArg<R>,
) -> Result<Complex<R>, KernelError> {
    let tu = series_terms(l, m, u)?;
    let tv = series_terms(l, m, v)?;
    Ok(paired_sum(l, &tu.q, &tv.tau))
}

pub(super) fn d_finite<R: Real>(
    l: u32,
    m: usize,
    u: KernelArg<R>,
    v: KernelArg<R>,
) -> Result<Complex<R>, KernelError> {
    let tu = series_terms(l, m, u)?;
    let tv = series_terms(l, m, v)?;
    Ok(paired_sum(l, &tu.q, &tv.q))
}

pub(super) fn i_finite<R: Real>(
    l: u32,
    m: usize,
    u: KernelArg<R>,
    v: KernelArg<R>,
) -> Result<Complex<R>, KernelError> {
    let tu = series_terms(l, m, u)?;
    let tv = series_terms(l, m, v)?;
    let mut out = paired_sum(l, &tu.tau, &tv.tau);
    if let (KernelArg::Real(x), KernelArg::Real(y)) = (u, v) {
        let half = R::of(0.5);
        if x > y {
            out.re += half;
        } else if x < y {
            out.re -= half;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> KernelArg<f64> {
        KernelArg::Real(x)
    }

    fn cx(re: f64, im: f64) -> KernelArg<f64> {
        KernelArg::Complex(Complex::new(re, im))
    }

    fn assert_close(got: Complex<f64>, want_re: f64, want_im: f64, tol: f64) {
        let want = Complex::new(want_re, want_im);
        assert!(
            (got - want).norm() <= tol * want.norm().max(1.0),
            "{got} vs {want}"
        );
    }

    #[test]
    fn real_arguments_match_frozen_partial_sums() {
        // L = 1, M = 4 at (0.3, -0.5).
        let (u, v) = (re(0.3), re(-0.5));
        assert_close(
            s_finite(1, 4, u, v).unwrap(),
            0.250_906_384_115_865_8,
            0.0,
            1e-13,
        );
        assert_close(
            s_finite(1, 4, v, u).unwrap(),
            0.304_642_721_068_191_3,
            0.0,
            1e-13,
        );
        assert_close(
            d_finite(1, 4, u, v).unwrap(),
            -0.23657408584401842,
            0.0,
            1e-13,
        );
        assert_close(
            i_finite(1, 4, u, v).unwrap(),
            0.255_141_567_758_489_3,
            0.0,
            1e-13,
        );

        // L = 2, M = 6 at (0.25, 0.5): every quantity is rational here.
        let (u, v) = (re(0.25), re(0.5));
        assert_close(s_finite(2, 6, u, v).unwrap(), 0.48980712890625, 0.0, 1e-14);
        assert_close(
            s_finite(2, 6, v, u).unwrap(),
            0.612_236_022_949_218_8,
            0.0,
            1e-14,
        );
        assert_close(d_finite(2, 6, u, v).unwrap(), 0.37298583984375, 0.0, 1e-14);
        assert_close(
            i_finite(2, 6, u, v).unwrap(),
            -0.357_143_402_099_609_4,
            0.0,
            1e-14,
        );
    }

    #[test]
    fn complex_arguments_match_frozen_partial_sums() {
        let z1 = cx(0.2, 0.4);
        let z2 = cx(-0.1, 0.55);

        assert_close(
            s_finite(1, 4, z1, z2).unwrap(),
            0.32473068699002295,
            -0.23431058167157113,
            1e-13,
        );
        assert_close(
            d_finite(1, 4, z1, z2).unwrap(),
            -0.054_996_969_834_232_18,
            0.02363600602665117,
            1e-13,
        );
        assert_close(
            i_finite(1, 4, z1, z2).unwrap(),
            0.054_996_969_834_232_18,
            0.02363600602665117,
            1e-13,
        );

        assert_close(
            s_finite(2, 6, z1, z2).unwrap(),
            0.5162279275490055,
            -0.598_159_550_220_871_2,
            1e-13,
        );
        assert_close(
            d_finite(2, 6, z1, z2).unwrap(),
            -0.070_128_665_103_333_22,
            0.023_551_345_446_617_73,
            1e-13,
        );
        assert_close(
            i_finite(2, 6, z1, z2).unwrap(),
            0.070_128_665_103_333_22,
            0.023_551_345_446_617_73,
            1e-13,
        );
    }

    #[test]
    fn mixed_arguments_match_frozen_partial_sums() {
        let z1 = cx(0.2, 0.4);
        let x = re(0.3);

        assert_close(
            s_finite(1, 4, z1, x).unwrap(),
            0.298_789_320_525_956_4,
            0.038_234_912_672_658_9,
            1e-13,
        );
        assert_close(
            i_finite(1, 4, z1, x).unwrap(),
            0.038_234_912_672_658_9,
            0.298_789_320_525_956_4,
            1e-13,
        );
        assert_close(
            s_finite(2, 6, z1, x).unwrap(),
            0.34678138426070163,
            0.089_995_953_218_289_78,
            1e-13,
        );
        assert_close(
            i_finite(2, 6, z1, x).unwrap(),
            0.089_995_953_218_289_78,
            0.34678138426070163,
            1e-13,
        );
    }

    #[test]
    fn conjugation_identities_hold_termwise() {
        // tau_j(z) = i conj(q_j(z)) forces Itilde = -conj(D) for two
        // complex arguments and Itilde(z, x) = i conj(S(z, x)) for mixed
        // ones, exactly at every truncation order.
        let z1 = cx(0.2, 0.4);
        let z2 = cx(-0.1, 0.55);
        let x = re(0.3);
        for (l, m) in [(1u32, 4usize), (2, 6), (3, 10)] {
            let d = d_finite(l, m, z1, z2).unwrap();
            let i_cc = i_finite(l, m, z1, z2).unwrap();
            assert!((i_cc + d.conj()).norm() < 1e-15, "L={l} M={m}");

            let s_cr = s_finite(l, m, z1, x).unwrap();
            let i_cr = i_finite(l, m, z1, x).unwrap();
            let rot = Complex::new(0.0, 1.0) * s_cr.conj();
            assert!((i_cr - rot).norm() < 1e-15, "L={l} M={m}");
        }
    }

    #[test]
    fn antisymmetry_is_bitwise() {
        let args = [re(0.3), re(-0.62), cx(0.2, 0.4), cx(-0.35, 0.18)];
        for &u in &args {
            for &v in &args {
                let duv = d_finite(2, 8, u, v).unwrap();
                let dvu = d_finite(2, 8, v, u).unwrap();
                assert_eq!(duv, -dvu);
                let iuv = i_finite(2, 8, u, v).unwrap();
                let ivu = i_finite(2, 8, v, u).unwrap();
                assert_eq!(iuv, -ivu);
            }
            assert_eq!(d_finite(2, 8, u, u).unwrap(), Complex::new(0.0, 0.0));
            assert_eq!(i_finite(2, 8, u, u).unwrap(), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn sign_term_jumps_across_the_diagonal() {
        // Removing the smooth partial sum leaves exactly the half-sign.
        let x = 0.41;
        let eps = 1e-9;
        let above = i_finite(1, 6, re(x + eps), re(x)).unwrap().re;
        let below = i_finite(1, 6, re(x - eps), re(x)).unwrap().re;
        assert!((above - below - 1.0).abs() < 1e-6);
    }
}
