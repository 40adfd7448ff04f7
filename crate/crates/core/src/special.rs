//! Gamma-function helpers shared by the kernel and weight evaluators.

use crate::scalar::Real;

/// Lanczos coefficients for g = 7, giving roughly 1e-14 relative accuracy
/// for arguments at and above 1/2, which is the whole range used here.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.5203681218851,
    -1259.1392167224028,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507343278686905,
    -0.13857109526572012,
    9.984_369_578_019_572e-6,
    1.5056327351493116e-7,
];

/// Natural log of the Gamma function for x > 0.
pub fn ln_gamma<R: Real>(x: R) -> R {
    debug_assert!(x > R::zero(), "ln_gamma requires a positive argument");
    if x < R::of(0.5) {
        // Reflection; only reachable if a caller ever goes below 1/2.
        let pi = R::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(R::one() - x);
    }
    let z = x - R::one();
    let mut acc = R::of(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += R::of(c) / (z + R::of_usize(i));
    }
    let t = z + R::of(LANCZOS_G) + R::of(0.5);
    let half_ln_two_pi = R::of(0.918_938_533_204_672_8);
    half_ln_two_pi + (z + R::of(0.5)) * t.ln() - t + acc.ln()
}

/// The half-integer Gamma ratio Gamma(1/2) Gamma((l+1)/2) / Gamma(l/2)
/// that normalizes the real-axis weight and the real-real kernel.
pub fn gamma_half_ratio<R: Real>(l: u32) -> R {
    let half = R::of(0.5);
    let lr = R::of_usize(l as usize);
    (ln_gamma(half) + ln_gamma((lr + R::one()) * half) - ln_gamma(lr * half)).exp()
}

/// The factorial ratio (l + m)! / (l! m!), i.e. the binomial coefficient
/// C(l + m, l). Exact integer arithmetic for small arguments, log-Gamma
/// otherwise so large ratios stay in floating range.
pub fn factorial_ratio<R: Real>(l: u32, m: u32) -> R {
    if l + m <= 20 {
        let mut num: u64 = 1;
        for i in 1..=(l as u64) {
            num = num * (m as u64 + i) / i;
        }
        R::of(num as f64)
    } else {
        let lr = R::of_usize(l as usize);
        let mr = R::of_usize(m as usize);
        (ln_gamma(lr + mr + R::one()) - ln_gamma(lr + R::one()) - ln_gamma(mr + R::one())).exp()
    }
}

/// Skew-orthogonality normalization r_j = l! (2j)! / (l + 2j)!.
pub fn skew_norm_r<R: Real>(l: u32, j: u32) -> R {
    factorial_ratio::<R>(l, 2 * j).recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        for n in 1..15u64 {
            let exact: f64 = (1..n).map(|k| (k as f64).ln()).sum();
            let got = ln_gamma(n as f64);
            assert!(
                (got - exact).abs() <= 1e-13 * exact.abs().max(1.0),
                "n = {n}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn ln_gamma_half_integers() {
        // Gamma(1/2) = sqrt(pi), Gamma(3/2) = sqrt(pi)/2, Gamma(5/2) = 3 sqrt(pi)/4.
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for (x, v) in [(0.5, sqrt_pi), (1.5, sqrt_pi / 2.0), (2.5, 0.75 * sqrt_pi)] {
            assert!((ln_gamma(x) - v.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_half_ratio_small_l() {
        // l = 1: Gamma(1/2) Gamma(1) / Gamma(1/2) = 1.
        assert!((gamma_half_ratio::<f64>(1) - 1.0).abs() < 1e-14);
        // l = 2: Gamma(1/2) Gamma(3/2) / Gamma(1) = pi / 2.
        assert!((gamma_half_ratio::<f64>(2) - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        // l = 3: Gamma(1/2) Gamma(2) / Gamma(3/2) = 2.
        assert!((gamma_half_ratio::<f64>(3) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn factorial_ratio_exact_region() {
        // (3 + 4)! / (3! 4!) = 35.
        assert_eq!(factorial_ratio::<f64>(3, 4), 35.0);
        // (1 + 6)! / (1! 6!) = 7.
        assert_eq!(factorial_ratio::<f64>(1, 6), 7.0);
    }

    #[test]
    fn factorial_ratio_log_region_consistent() {
        // C(24, 10) computed exactly vs the log-Gamma path.
        let exact = 1961256.0;
        let got = factorial_ratio::<f64>(10, 14);
        assert!((got - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn skew_norm_values() {
        // r_0 = 1 for every l; r_1 at l = 1 is 1! 2! / 3! = 1/3.
        assert_eq!(skew_norm_r::<f64>(1, 0), 1.0);
        assert!((skew_norm_r::<f64>(1, 1) - 1.0 / 3.0).abs() < 1e-15);
        // r_2 at l = 3: 3! 4! / 7! = 144 / 5040.
        assert!((skew_norm_r::<f64>(3, 2) - 144.0 / 5040.0).abs() < 1e-15);
    }
}
