//! Householder QR for square real matrices; the backbone of the uniform
//! orthogonal-matrix sampler.

use super::Mat;
use crate::scalar::Real;

/// QR factorization of a square real matrix: returns (Q, R) with Q
/// orthogonal (explicitly formed) and R upper triangular.
pub fn qr_square<R: Real>(a: &Mat<R>) -> (Mat<R>, Mat<R>) {
    assert!(a.is_square(), "qr_square expects a square matrix");
    let n = a.rows();
    let mut r = a.clone();
    // Householder vectors are stored column by column; tiny sizes here so a
    // dense scratch matrix is fine.
    let mut vs: Vec<Vec<R>> = Vec::with_capacity(n.saturating_sub(1));

    for k in 0..n.saturating_sub(1) {
        // Build the reflector that zeroes column k below the diagonal.
        let mut norm_sq = R::zero();
        for i in k..n {
            norm_sq += r[(i, k)] * r[(i, k)];
        }
        let norm = norm_sq.sqrt();
        if norm == R::zero() {
            vs.push(Vec::new());
            continue;
        }
        let alpha = if r[(k, k)] >= R::zero() { -norm } else { norm };
        let mut v = vec![R::zero(); n - k];
        v[0] = r[(k, k)] - alpha;
        for i in (k + 1)..n {
            v[i - k] = r[(i, k)];
        }
        let mut v_sq = R::zero();
        for &x in &v {
            v_sq += x * x;
        }
        if v_sq == R::zero() {
            vs.push(Vec::new());
            continue;
        }
        // Apply I - 2 v v^T / (v^T v) from the left.
        for j in k..n {
            let mut dot = R::zero();
            for i in k..n {
                dot += v[i - k] * r[(i, j)];
            }
            let scale = R::of(2.0) * dot / v_sq;
            for i in k..n {
                let sub = scale * v[i - k];
                r[(i, j)] -= sub;
            }
        }
        vs.push(v);
    }

    // Accumulate Q by applying the reflectors to the identity in reverse.
    let mut q = Mat::identity(n);
    for k in (0..vs.len()).rev() {
        let v = &vs[k];
        if v.is_empty() {
            continue;
        }
        let mut v_sq = R::zero();
        for &x in v {
            v_sq += x * x;
        }
        for j in 0..n {
            let mut dot = R::zero();
            for i in k..n {
                dot += v[i - k] * q[(i, j)];
            }
            let scale = R::of(2.0) * dot / v_sq;
            for i in k..n {
                let sub = scale * v[i - k];
                q[(i, j)] -= sub;
            }
        }
    }
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_dev(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m = m.max((a[(i, j)] - b[(i, j)]).abs());
            }
        }
        m
    }

    #[test]
    fn reconstruction_and_orthogonality() {
        let n = 8;
        let mut seed = 0xdeadbeefu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = Mat::from_fn(n, n, |_, _| next() * 3.0);
        let (q, r) = qr_square(&a);
        assert!(max_abs_dev(&q.dot(&r), &a) < 1e-13);
        assert!(max_abs_dev(&q.transpose().dot(&q), &Mat::identity(n)) < 1e-13);
        // R is upper triangular.
        for i in 0..n {
            for j in 0..i {
                assert!(r[(i, j)].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn one_by_one() {
        let a = Mat::from_vec(1, 1, vec![-3.0f64]);
        let (q, r) = qr_square(&a);
        assert!((q[(0, 0)] * r[(0, 0)] + 3.0).abs() < 1e-15);
        assert!((q[(0, 0)].abs() - 1.0).abs() < 1e-15);
    }
}
