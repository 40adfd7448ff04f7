//! Eigenvalues of a real nonsymmetric matrix: diagonal balancing,
//! Householder reduction to upper Hessenberg form, then the Francis
//! double-shift QR iteration. This follows the classic Handbook/EISPACK
//! routines (balanc, orthes, hqr) restricted to eigenvalues only, so
//! complex conjugate pairs come out exact by construction.

use num_complex::Complex;

use super::{LinalgError, Mat};
use crate::scalar::Real;

/// Fortran SIGN(a, b): |a| carrying the sign of b (positive for b = 0).
#[inline]
fn sign_to<R: Real>(magnitude: R, sign_of: R) -> R {
    if sign_of >= R::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Iterative two-sided diagonal scaling (radix 2, so the scaling is exact)
/// that roughly equalizes row and column norms. Similarity transform, so
/// eigenvalues are unchanged; no back-transform is needed.
fn balance<R: Real>(a: &mut Mat<R>) {
    let n = a.rows();
    let radix = R::of(2.0);
    let radix_sq = R::of(4.0);
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = R::zero();
            let mut r = R::zero();
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == R::zero() || r == R::zero() {
                continue;
            }
            let mut f = R::one();
            let s = c + r;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix_sq;
            }
            if (c + r) / f < R::of(0.95) * s {
                done = false;
                let g = f.recip();
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return;
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg<R: Real>(h: &mut Mat<R>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![R::zero(); n];
    for m in 1..high {
        let mut scale = R::zero();
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale == R::zero() {
            continue;
        }
        let mut hsum = R::zero();
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hsum += ort[i] * ort[i];
        }
        let mut g = hsum.sqrt();
        if ort[m] > R::zero() {
            g = -g;
        }
        hsum -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = R::zero();
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hsum;
            for i in m..=high {
                let sub = f * ort[i];
                h[(i, j)] -= sub;
            }
        }
        for i in 0..=high {
            let mut f = R::zero();
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hsum;
            for j in m..=high {
                let sub = f * ort[j];
                h[(i, j)] -= sub;
            }
        }
        h[(m, m - 1)] = scale * g;
        // Entries below the subdiagonal in this column are now zero by
        // construction; force them exactly so the QR sweep sees clean zeros.
        for i in (m + 1)..=high {
            h[(i, m - 1)] = R::zero();
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns all
/// eigenvalues, with complex pairs produced as exact conjugates.
fn hqr<R: Real>(h: &mut Mat<R>, n: usize) -> Result<Vec<Complex<R>>, LinalgError> {
    let mut wr = vec![R::zero(); n];
    let mut wi = vec![R::zero(); n];
    if n == 0 {
        return Ok(Vec::new());
    }

    let low = 0usize;
    let mut norm = R::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            norm += h[(i, j)].abs();
        }
    }

    let budget = 30 * n.max(1);
    let mut itn = budget;
    let mut t = R::zero();
    let mut en_i: isize = n as isize - 1;

    'deflate: while en_i >= low as isize {
        let en = en_i as usize;
        let mut its = 0usize;

        loop {
            // Look for a single small subdiagonal element.
            let mut l = low;
            for ll in ((low + 1)..=en).rev() {
                let mut s = h[(ll - 1, ll - 1)].abs() + h[(ll, ll)].abs();
                if s == R::zero() {
                    s = norm;
                }
                if s + h[(ll, ll - 1)].abs() == s {
                    l = ll;
                    break;
                }
            }

            let mut x = h[(en, en)];
            if l == en {
                wr[en] = x + t;
                wi[en] = R::zero();
                en_i -= 1;
                continue 'deflate;
            }

            let na = en - 1;
            let mut y = h[(na, na)];
            let mut w = h[(en, na)] * h[(na, en)];

            if l == na {
                // Isolated 2x2 block: real pair or exact conjugate pair.
                let p = (y - x) * R::of(0.5);
                let q = p * p + w;
                let zz = q.abs().sqrt();
                let x_shifted = x + t;
                if q >= R::zero() {
                    let zz = p + sign_to(zz, p);
                    wr[na] = x_shifted + zz;
                    wr[en] = wr[na];
                    if zz != R::zero() {
                        wr[en] = x_shifted - w / zz;
                    }
                    wi[na] = R::zero();
                    wi[en] = R::zero();
                } else {
                    wr[na] = x_shifted + p;
                    wr[en] = x_shifted + p;
                    wi[na] = zz;
                    wi[en] = -zz;
                }
                en_i -= 2;
                continue 'deflate;
            }

            if itn == 0 {
                return Err(LinalgError::NoConvergence {
                    eigen_index: en,
                    iterations: budget,
                });
            }
            if its == 10 || its == 20 {
                // Exceptional shift to break symmetry-induced stalls.
                t += x;
                for i in low..=en {
                    let sub = x;
                    h[(i, i)] -= sub;
                }
                let s = h[(en, na)].abs() + h[(na, en - 2)].abs();
                x = R::of(0.75) * s;
                y = x;
                w = R::of(-0.4375) * s * s;
            }
            its += 1;
            itn -= 1;

            // Look for two consecutive small subdiagonal elements.
            let mut p;
            let mut q;
            let mut r;
            let mut m = en - 2;
            loop {
                let zz = h[(m, m)];
                let rr = x - zz;
                let ss = y - zz;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - zz - rr - ss;
                r = h[(m + 2, m + 1)];
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let tst1 = p.abs() * (h[(m - 1, m - 1)].abs() + zz.abs() + h[(m + 1, m + 1)].abs());
                if tst1 + h[(m, m - 1)].abs() * (q.abs() + r.abs()) == tst1 {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=en {
                h[(i, i - 2)] = R::zero();
                if i > m + 2 {
                    h[(i, i - 3)] = R::zero();
                }
            }

            // Double QR sweep on rows l..=en, columns m..=en.
            for k in m..=na {
                let notlast = k != na;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { R::zero() };
                    x = p.abs() + q.abs() + r.abs();
                    if x == R::zero() {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let s = sign_to((p * p + q * q + r * r).sqrt(), p);
                if k != m {
                    h[(k, k - 1)] = -s * x;
                } else if l != m {
                    h[(k, k - 1)] = -h[(k, k - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                let zz = r / s;
                q /= p;
                r /= p;

                if notlast {
                    for j in k..=en {
                        let pp = h[(k, j)] + q * h[(k + 1, j)] + r * h[(k + 2, j)];
                        let s1 = pp * x;
                        h[(k, j)] -= s1;
                        let s2 = pp * y;
                        h[(k + 1, j)] -= s2;
                        let s3 = pp * zz;
                        h[(k + 2, j)] -= s3;
                    }
                    let jmax = en.min(k + 3);
                    for i in l..=jmax {
                        let pp = x * h[(i, k)] + y * h[(i, k + 1)] + zz * h[(i, k + 2)];
                        h[(i, k)] -= pp;
                        let s1 = pp * q;
                        h[(i, k + 1)] -= s1;
                        let s2 = pp * r;
                        h[(i, k + 2)] -= s2;
                    }
                } else {
                    for j in k..=en {
                        let pp = h[(k, j)] + q * h[(k + 1, j)];
                        let s1 = pp * x;
                        h[(k, j)] -= s1;
                        let s2 = pp * y;
                        h[(k + 1, j)] -= s2;
                    }
                    let jmax = en.min(k + 3);
                    for i in l..=jmax {
                        let pp = x * h[(i, k)] + y * h[(i, k + 1)];
                        h[(i, k)] -= pp;
                        let s1 = pp * q;
                        h[(i, k + 1)] -= s1;
                    }
                }
            }
        }
    }

    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex::new(re, im))
        .collect())
}

/// All eigenvalues of a square real matrix.
pub fn eigenvalues<R: Real>(a: &Mat<R>) -> Result<Vec<Complex<R>>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    for &x in a.data() {
        if !x.is_finite() {
            return Err(LinalgError::NonFinite);
        }
    }
    let n = a.rows();
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    hqr(&mut h, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_reals(mut v: Vec<Complex<f64>>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn known_real_spectrum() {
        // Companion matrix of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
        let a = Mat::from_vec(
            3,
            3,
            vec![0.0, 0.0, 6.0, 1.0, 0.0, -11.0, 0.0, 1.0, 6.0],
        );
        let ev = sorted_reals(eigenvalues(&a).unwrap());
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn rotation_block_gives_exact_conjugates() {
        // [[cos, -sin], [sin, cos]] has eigenvalues exp(+-i theta).
        let th = 0.7f64;
        let a = Mat::from_vec(2, 2, vec![th.cos(), -th.sin(), th.sin(), th.cos()]);
        let ev = eigenvalues(&a).unwrap();
        assert_eq!(ev[0].re, ev[1].re);
        assert_eq!(ev[0].im, -ev[1].im);
        assert!((ev[0].re - th.cos()).abs() < 1e-14);
        assert!((ev[0].im.abs() - th.sin()).abs() < 1e-14);
    }

    #[test]
    fn trace_and_second_moment_match() {
        let n = 24;
        let mut seed = 0xabcdefu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = Mat::from_fn(n, n, |_, _| next());
        let ev = eigenvalues(&a).unwrap();
        let sum: Complex<f64> = ev.iter().sum();
        let tr: f64 = (0..n).map(|i| a[(i, i)]).sum();
        assert!((sum.re - tr).abs() < 1e-10, "trace mismatch {}", sum.re - tr);
        assert!(sum.im.abs() < 1e-12);

        let sum_sq: Complex<f64> = ev.iter().map(|z| z * z).sum();
        let a2 = a.dot(&a);
        let tr2: f64 = (0..n).map(|i| a2[(i, i)]).sum();
        assert!((sum_sq.re - tr2).abs() < 1e-9);
        assert!(sum_sq.im.abs() < 1e-10);
    }

    #[test]
    fn badly_scaled_matrix_needs_balancing() {
        // Same spectrum as the 3x3 companion above but conjugated by a
        // diagonal with a 1e8 dynamic range.
        let d = [1.0, 1e8, 1e-4];
        let c = Mat::from_vec(
            3,
            3,
            vec![0.0, 0.0, 6.0, 1.0, 0.0, -11.0, 0.0, 1.0, 6.0],
        );
        let a = Mat::from_fn(3, 3, |i, j| d[i] * c[(i, j)] / d[j]);
        let ev = sorted_reals(eigenvalues(&a).unwrap());
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn empty_and_single() {
        assert!(eigenvalues(&Mat::<f64>::zeros(0, 0)).unwrap().is_empty());
        let a = Mat::from_vec(1, 1, vec![4.25]);
        assert_eq!(eigenvalues(&a).unwrap()[0], Complex::new(4.25, 0.0));
    }
}
