//! Globally adaptive one-dimensional quadrature built on the 15-point
//! Kronrod rule with embedded 7-point Gauss rule.
//!
//! The driver keeps a worst-first queue of subintervals and bisects until
//! the summed error estimate meets the requested tolerance. Integrands are
//! real-valued; two-dimensional integrals in this crate are tensor products
//! of two one-dimensional passes at the call site.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::scalar::Real;

/// Kronrod abscissae on [0, 1] (positive half; even entries are the
/// embedded Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and work cap for one adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadConfig<R> {
    pub abs_tol: R,
    pub rel_tol: R,
    /// Maximum number of subintervals before giving up.
    pub max_intervals: usize,
}

impl<R: Real> Default for QuadConfig<R> {
    fn default() -> Self {
        QuadConfig {
            abs_tol: R::of(1e-12),
            rel_tol: R::of(1e-10),
            max_intervals: 4000,
        }
    }
}

impl<R: Real> QuadConfig<R> {
    /// Same interval cap with scaled tolerances, for nested integrals.
    pub fn with_tols(&self, abs_tol: R, rel_tol: R) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            max_intervals: self.max_intervals,
        }
    }
}

/// Converged integral with its error estimate.
#[derive(Clone, Copy, Debug)]
pub struct QuadOutcome<R> {
    pub value: R,
    pub error: R,
    pub intervals: usize,
}

#[derive(Debug, Error)]
pub enum QuadError<R: Real> {
    #[error("quadrature did not meet tolerance: value {value}, achieved error {error}, requested abs {abs_tol} / rel {rel_tol}")]
    ToleranceNotMet {
        value: R,
        error: R,
        abs_tol: R,
        rel_tol: R,
    },
    #[error("integrand returned a non-finite value near {at}")]
    NonFinite { at: R },
}

struct Segment<R> {
    a: R,
    b: R,
    value: R,
    error: R,
}

impl<R: Real> PartialEq for Segment<R> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<R: Real> Eq for Segment<R> {}
impl<R: Real> PartialOrd for Segment<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for Segment<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// One Kronrod-15 application on [a, b]; returns (value, error estimate).
///
/// The error estimate follows the QUADPACK rescaling: the raw Gauss/Kronrod
/// difference is damped against the integral of |f - mean| so that sharp
/// but integrable features do not produce wildly pessimistic estimates.
fn kronrod15<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R) -> Result<(R, R), QuadError<R>> {
    let half = R::of(0.5);
    let center = half * (a + b);
    let half_length = half * (b - a);
    let abs_half = half_length.abs();

    let mut fv = [R::zero(); 15];
    for (i, &x) in XGK.iter().enumerate() {
        let dx = R::of(x) * half_length;
        let (lo, hi) = (center - dx, center + dx);
        let f_lo = f(lo);
        let f_hi = if i == 7 { f_lo } else { f(hi) };
        if !f_lo.is_finite() {
            return Err(QuadError::NonFinite { at: lo });
        }
        if !f_hi.is_finite() {
            return Err(QuadError::NonFinite { at: hi });
        }
        fv[i] = f_lo;
        fv[14 - i] = f_hi;
    }

    let mut result_gauss = R::zero();
    let mut result_kronrod = R::zero();
    let mut result_abs = R::zero();
    for i in 0..8 {
        let wk = R::of(WGK[i]);
        let pair = if i == 7 { fv[7] } else { fv[i] + fv[14 - i] };
        result_kronrod += wk * pair;
        result_abs += wk * if i == 7 {
            fv[7].abs()
        } else {
            fv[i].abs() + fv[14 - i].abs()
        };
        if i % 2 == 1 {
            // Odd Kronrod indices are the embedded Gauss nodes; i == 7 is
            // the shared center point.
            result_gauss += R::of(WG[i / 2]) * pair;
        }
    }

    let mean = result_kronrod * half;
    let mut result_asc = R::zero();
    for i in 0..8 {
        let wk = R::of(WGK[i]);
        result_asc += wk * if i == 7 {
            (fv[7] - mean).abs()
        } else {
            (fv[i] - mean).abs() + (fv[14 - i] - mean).abs()
        };
    }

    let value = result_kronrod * half_length;
    let result_abs = result_abs * abs_half;
    let result_asc = result_asc * abs_half;
    let mut err = ((result_kronrod - result_gauss) * half_length).abs();
    if result_asc > R::zero() && err > R::zero() {
        let scale = (R::of(200.0) * err / result_asc).powf(R::of(1.5));
        err = result_asc * scale.min(R::one());
    }
    let round_off = R::of(50.0) * R::epsilon() * result_abs;
    if round_off > R::min_positive_value() {
        err = err.max(round_off);
    }
    Ok((value, err))
}

/// Adaptive integral of `f` over [a, b].
pub fn integrate<R: Real, F: Fn(R) -> R>(
    f: F,
    a: R,
    b: R,
    cfg: &QuadConfig<R>,
) -> Result<QuadOutcome<R>, QuadError<R>> {
    if a == b {
        return Ok(QuadOutcome {
            value: R::zero(),
            error: R::zero(),
            intervals: 0,
        });
    }
    let (value, error) = kronrod15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;

    while total_err > cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        if heap.len() >= cfg.max_intervals {
            return Err(QuadError::ToleranceNotMet {
                value: total,
                error: total_err,
                abs_tol: cfg.abs_tol,
                rel_tol: cfg.rel_tol,
            });
        }
        let worst = heap.pop().expect("non-empty heap while error is non-zero");
        let mid = R::of(0.5) * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in this precision; accept it.
            if heap.is_empty()
                || heap.iter().all(|s| {
                    let m = R::of(0.5) * (s.a + s.b);
                    m <= s.a || m >= s.b
                })
            {
                break;
            }
            heap.push(worst);
            // Rotate to the widest splittable interval instead.
            let mut segs: Vec<Segment<R>> = heap.into_vec();
            segs.sort_by(|x, y| {
                (y.b - y.a)
                    .partial_cmp(&(x.b - x.a))
                    .unwrap_or(Ordering::Equal)
            });
            let widest = segs.remove(0);
            heap = segs.into_iter().collect();
            let mid = R::of(0.5) * (widest.a + widest.b);
            let (v1, e1) = kronrod15(&f, widest.a, mid)?;
            let (v2, e2) = kronrod15(&f, mid, widest.b)?;
            total += v1 + v2 - widest.value;
            total_err += e1 + e2 - widest.error;
            heap.push(Segment {
                a: widest.a,
                b: mid,
                value: v1,
                error: e1,
            });
            heap.push(Segment {
                a: mid,
                b: widest.b,
                value: v2,
                error: e2,
            });
            continue;
        }
        let (v1, e1) = kronrod15(&f, worst.a, mid)?;
        let (v2, e2) = kronrod15(&f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    // Re-sum for a final value with less accumulation noise.
    let intervals = heap.len();
    let mut value = R::zero();
    let mut error = R::zero();
    for seg in heap.iter() {
        value += seg.value;
        error += seg.error;
    }
    Ok(QuadOutcome {
        value,
        error,
        intervals,
    })
}
