//! Real-point correlation functions as Gaussian expectations.
//!
//! At real points `x_1..x_k` the limiting process and its derivative are
//! jointly Gaussian. Their `2k x 2k` covariance [`DeltaMatrix`] has the
//! per-pair blocks (with `t = x_j * x_l`)
//!
//! ```text
//! cov(f(x_j), f(x_l))   = 1 / (1 - t)
//! cov(f(x_j), f'(x_l))  = x_l / (1 - t)^2
//! cov(f'(x_j), f'(x_l)) = (1 + t) / (1 - t)^3
//! ```
//!
//! Conditioning the derivatives on all values being zero leaves a centered
//! Gaussian with precision [`OmegaMatrix`] (the derivative rows/columns of
//! the inverse covariance), and the k-point density of real zeros becomes
//!
//! ```text
//! rho_k = (2 pi)^-k (det Delta)^-1/2 Int |y_1 .. y_k| exp(-y' Omega y / 2) dy
//!       = (2 pi)^-k/2 (det Delta)^-1/2 (det Sigma)^1/2  E |Y_1 .. Y_k|,
//! ```
//!
//! with `Sigma = Omega^-1` and `Y ~ N(0, Sigma)`. One and two points have
//! closed-form Gaussian absolute moments; three points and up fall back to
//! Monte Carlo with a reported standard error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{ClassicalError, REAL_POINT_MARGIN};
use crate::linalg::{cholesky_real, tri_solve_real, LinalgError, Mat};
use crate::scalar::Real;

/// Fixed number of independent generator sub-streams the Monte Carlo draw
/// budget is split over; results are identical for any thread count.
const PARTITIONS: u64 = 64;

/// Joint covariance of the limiting process values and derivatives at a
/// list of real points, stored with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct DeltaMatrix<R: Real> {
    points: Vec<R>,
    mat: Mat<R>,
    chol: Mat<R>,
    ln_det: R,
}

impl<R: Real> DeltaMatrix<R> {
    /// Builds the covariance at the given points.
    ///
    /// The points must be finite, pairwise distinct, and at least
    /// [`REAL_POINT_MARGIN`] away from the endpoints at +-1. The matrix is
    /// symmetric by construction; losing positive definiteness means the
    /// points are degenerate.
    pub fn new(points: &[R]) -> Result<Self, ClassicalError> {
        if points.is_empty() {
            return Err(ClassicalError::EmptyPointList);
        }
        let bound = R::of(1.0 - REAL_POINT_MARGIN);
        for (index, &x) in points.iter().enumerate() {
            if !x.is_finite() {
                return Err(ClassicalError::NonFinitePoint { index });
            }
            if x.abs() >= bound {
                return Err(ClassicalError::PointOutOfDomain {
                    index,
                    modulus: x.abs().to_f64().unwrap_or(f64::NAN),
                    margin: REAL_POINT_MARGIN,
                });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(ClassicalError::CoincidentPoints { i, j });
                }
            }
        }

        let k = points.len();
        let mut mat = Mat::zeros(2 * k, 2 * k);
        for j in 0..k {
            for l in 0..k {
                let t = points[j] * points[l];
                let d = R::one() - t;
                let d2 = d * d;
                let d3 = d2 * d;
                mat[(2 * j, 2 * l)] = d.recip();
                mat[(2 * j, 2 * l + 1)] = points[j] / d2;
                mat[(2 * j + 1, 2 * l)] = points[l] / d2;
                mat[(2 * j + 1, 2 * l + 1)] = (R::one() + t) / d3;
            }
        }
        let chol = cholesky_real(&mat).map_err(|err| match err {
            LinalgError::NotPositiveDefinite { .. } => ClassicalError::NotPositiveDefinite {
                what: "value-derivative covariance",
            },
            other => ClassicalError::Linalg(other),
        })?;
        let ln_det = ln_det_from_chol(&chol);
        Ok(Self {
            points: points.to_vec(),
            mat,
            chol,
            ln_det,
        })
    }

    /// Number of points.
    pub fn k(&self) -> usize {
        self.points.len()
    }

    /// The points the covariance was built at.
    pub fn points(&self) -> &[R] {
        &self.points
    }

    /// The covariance matrix itself (dimension `2k x 2k`).
    pub fn matrix(&self) -> &Mat<R> {
        &self.mat
    }

    /// Natural log of the determinant.
    pub fn ln_det(&self) -> R {
        self.ln_det
    }

    /// The determinant; may overflow for many points near the endpoints,
    /// in which case [`Self::ln_det`] is the stable quantity.
    pub fn det(&self) -> R {
        self.ln_det.exp()
    }

    /// Precision of the derivatives conditioned on all values vanishing:
    /// the odd-indexed rows and columns of the inverse covariance.
    pub fn omega(&self) -> Result<OmegaMatrix<R>, ClassicalError> {
        let inv = spd_inverse(&self.chol);
        let k = self.k();
        let om = Mat::from_fn(k, k, |i, j| inv[(2 * i + 1, 2 * j + 1)]);
        let chol = cholesky_real(&om).map_err(|err| match err {
            LinalgError::NotPositiveDefinite { .. } => ClassicalError::NotPositiveDefinite {
                what: "conditioned derivative precision",
            },
            other => ClassicalError::Linalg(other),
        })?;
        let ln_det = ln_det_from_chol(&chol);
        Ok(OmegaMatrix { mat: om, chol, ln_det })
    }
}

/// Precision matrix of the zero-conditioned derivatives, stored with its
/// Cholesky factor.
#[derive(Debug, Clone)]
pub struct OmegaMatrix<R: Real> {
    mat: Mat<R>,
    chol: Mat<R>,
    ln_det: R,
}

impl<R: Real> OmegaMatrix<R> {
    /// Number of points.
    pub fn k(&self) -> usize {
        self.mat.rows()
    }

    /// The precision matrix itself (dimension `k x k`).
    pub fn matrix(&self) -> &Mat<R> {
        &self.mat
    }

    /// Natural log of the determinant.
    pub fn ln_det(&self) -> R {
        self.ln_det
    }

    /// The covariance of the conditioned derivatives: the inverse of this
    /// precision matrix.
    pub fn sigma(&self) -> Mat<R> {
        spd_inverse(&self.chol)
    }
}

/// Log-determinant of `L L'` from the triangular factor `L`.
fn ln_det_from_chol<R: Real>(chol: &Mat<R>) -> R {
    let two = R::of(2.0);
    (0..chol.rows()).map(|i| two * chol[(i, i)].ln()).sum()
}

/// Inverse of the matrix with Cholesky factor `chol`, exactly symmetrized.
fn spd_inverse<R: Real>(chol: &Mat<R>) -> Mat<R> {
    let n = chol.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![R::zero(); n];
        e[j] = R::one();
        cols.push(tri_solve_real(chol, &e));
    }
    let half = R::of(0.5);
    Mat::from_fn(n, n, |i, j| half * (cols[j][i] + cols[i][j]))
}

/// Options for the Monte Carlo stage of [`bleher_di_rho`]. The closed
/// forms at one and two points ignore everything but construction checks.
#[derive(Debug, Clone)]
pub struct BleherDiOptions {
    /// Total Gaussian draws, split over [`PARTITIONS`] fixed sub-streams.
    pub draws: u64,
    /// Seed for the deterministic generator family.
    pub seed: u64,
    /// If set, the estimate must reach this relative standard error or the
    /// call fails with [`ClassicalError::ToleranceNotMet`] (which still
    /// carries the value and its error). `None` disables the gate.
    pub target_rel_error: Option<f64>,
}

impl Default for BleherDiOptions {
    fn default() -> Self {
        Self {
            draws: 1_000_000,
            seed: 0,
            target_rel_error: Some(1e-3),
        }
    }
}

/// A correlation value together with the Monte Carlo standard error of the
/// estimate; `std_error` is `None` when a closed form was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleherDiEstimate<R: Real> {
    pub value: R,
    pub std_error: Option<R>,
}

/// k-point correlation function of real zeros via the Gaussian-expectation
/// formulation.
///
/// One and two points are evaluated in closed form; three and more use
/// Monte Carlo over the conditioned-derivative Gaussian, deterministic in
/// `opts.seed` regardless of thread count.
pub fn bleher_di_rho<R: Real>(
    points: &[R],
    opts: &BleherDiOptions,
) -> Result<BleherDiEstimate<R>, ClassicalError> {
    let delta = DeltaMatrix::new(points)?;
    let omega = delta.omega()?;
    let k = delta.k();

    // ln of (2 pi)^{-k/2} (det Delta)^{-1/2} (det Sigma)^{1/2}, with
    // det Sigma = 1 / det Omega.
    let half = R::of(0.5);
    let kk = R::of_usize(k);
    let ln_pre = -(half * kk) * R::TAU().ln() - half * delta.ln_det() - half * omega.ln_det();
    let pre = ln_pre.exp();

    match k {
        1 => {
            // E|Y| = sigma sqrt(2/pi) for Y ~ N(0, sigma^2), and here
            // sigma^2 = 1/omega.
            let sigma = (-half * omega.ln_det()).exp();
            let expectation = sigma * (R::of(2.0) / R::PI()).sqrt();
            Ok(BleherDiEstimate {
                value: pre * expectation,
                std_error: None,
            })
        }
        2 => {
            let cov = omega.sigma();
            let s1 = cov[(0, 0)].sqrt();
            let s2 = cov[(1, 1)].sqrt();
            let r = (cov[(0, 1)] / (s1 * s2)).max(-R::one()).min(R::one());
            // E|Y1 Y2| for a centered bivariate Gaussian.
            let expectation = R::of(2.0) / R::PI()
                * s1
                * s2
                * ((R::one() - r * r).sqrt() + r * r.asin());
            Ok(BleherDiEstimate {
                value: pre * expectation,
                std_error: None,
            })
        }
        _ => {
            if opts.draws < 2 {
                return Err(ClassicalError::BadDrawBudget { draws: opts.draws });
            }
            let cov = omega.sigma();
            let chol = cholesky_real(&cov).map_err(|err| match err {
                LinalgError::NotPositiveDefinite { .. } => ClassicalError::NotPositiveDefinite {
                    what: "conditioned derivative covariance",
                },
                other => ClassicalError::Linalg(other),
            })?;
            let (sum, sum_sq) = (0..PARTITIONS)
                .into_par_iter()
                .map(|part| partition_moments(&chol, opts.seed, part, opts.draws))
                .collect::<Vec<_>>()
                .into_iter()
                .fold((R::zero(), R::zero()), |(s, q), (ps, pq)| (s + ps, q + pq));

            let n = R::of(opts.draws as f64);
            let mean = sum / n;
            let var_draw = ((sum_sq - n * mean * mean) / (n - R::one())).max(R::zero());
            let se_mean = (var_draw / n).sqrt();
            let value = pre * mean;
            let std_error = pre * se_mean;
            if let Some(target) = opts.target_rel_error {
                let achieved = (std_error / value).to_f64().unwrap_or(f64::NAN);
                #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must also fail
                if !(achieved <= target) {
                    return Err(ClassicalError::ToleranceNotMet {
                        value: value.to_f64().unwrap_or(f64::NAN),
                        std_error: std_error.to_f64().unwrap_or(f64::NAN),
                        achieved,
                        target,
                    });
                }
            }
            Ok(BleherDiEstimate {
                value,
                std_error: Some(std_error),
            })
        }
    }
}

/// Sum and sum of squares of `|Y_1 .. Y_k|` over this partition's share of
/// the draw budget. Partition `p` owns sub-stream `p` of the generator and
/// `total / PARTITIONS` draws (plus one of the remainder when `p` is below
/// it), so the overall result never depends on scheduling.
fn partition_moments<R: Real>(chol: &Mat<R>, seed: u64, part: u64, total: u64) -> (R, R) {
    let base = total / PARTITIONS;
    let share = base + u64::from(part < total % PARTITIONS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(part);

    let k = chol.rows();
    let mut z = vec![R::zero(); k];
    let mut sum = R::zero();
    let mut sum_sq = R::zero();
    for _ in 0..share {
        for zi in z.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut rng);
            *zi = R::of(g);
        }
        let mut prod = R::one();
        for i in 0..k {
            let mut y = R::zero();
            for (j, &zj) in z.iter().enumerate().take(i + 1) {
                y += chol[(i, j)] * zj;
            }
            prod *= y;
        }
        let a = prod.abs();
        sum += a;
        sum_sq += a * a;
    }
    (sum, sum_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{rho1_real_closed, rho2_real_closed, rho_pfaffian, KernelSet, PointConfig};

    /// The Pfaffian route at the same points, bridging the formulations.
    fn pfaffian_reference(points: &[f64]) -> f64 {
        let kernels = KernelSet::limiting(1).expect("order 1 is valid");
        let config = PointConfig::new(points, &[]).expect("test points are valid");
        rho_pfaffian(&kernels, &config).expect("density evaluates")
    }

    fn estimate(points: &[f64], opts: &BleherDiOptions) -> BleherDiEstimate<f64> {
        bleher_di_rho(points, opts).expect("evaluation succeeds")
    }

    #[test]
    fn covariance_at_the_origin_is_the_identity() {
        let delta = DeltaMatrix::new(&[0.0f64]).unwrap();
        let m = delta.matrix();
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(0, 1)], 0.0);
        assert_eq!(m[(1, 0)], 0.0);
        assert_eq!(m[(1, 1)], 1.0);
        assert_eq!(delta.ln_det(), 0.0);
    }

    #[test]
    fn single_point_determinant_and_precision_closed_forms() {
        // det Delta = (1 - x^2)^-4 and omega = (1 - x^2)^3 at one point.
        for &x in &[0.3f64, 0.5, -0.7] {
            let delta = DeltaMatrix::new(&[x]).unwrap();
            let u = 1.0 - x * x;
            assert!((delta.det() - u.powi(-4)).abs() <= 1e-12 * u.powi(-4));
            let omega = delta.omega().unwrap();
            assert!((omega.matrix()[(0, 0)] - u.powi(3)).abs() <= 1e-14 * u.powi(3));
        }
        let omega = DeltaMatrix::new(&[0.5f64]).unwrap().omega().unwrap();
        assert!((omega.matrix()[(0, 0)] - 0.421875).abs() < 1e-15);
    }

    #[test]
    fn precision_inverse_round_trips() {
        let delta = DeltaMatrix::new(&[0.1f64, -0.4, 0.7]).unwrap();
        let omega = delta.omega().unwrap();
        let sigma = omega.sigma();
        let k = omega.k();
        for i in 0..k {
            for j in 0..k {
                let mut dot = 0.0;
                for l in 0..k {
                    dot += omega.matrix()[(i, l)] * sigma[(l, j)];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12, "({i},{j}) -> {dot}");
            }
        }
    }

    #[test]
    fn single_point_density_matches_arcsine_form() {
        let opts = BleherDiOptions::default();
        for &x in &[0.0f64, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9] {
            let got = estimate(&[x], &opts);
            assert!(got.std_error.is_none());
            let want = rho1_real_closed(1, x).unwrap();
            assert!(
                (got.value - want).abs() <= 1e-12 * want,
                "x = {x}: {} vs {want}",
                got.value
            );
        }
        let anchor = estimate(&[0.5f64], &opts).value;
        assert!((anchor - 0.42441318157838753).abs() < 1e-15);
    }

    #[test]
    fn pair_density_matches_two_point_closed_form() {
        let opts = BleherDiOptions::default();
        let grid = [-0.55f64, -0.2, 0.1, 0.3, 0.62];
        for &x in &grid {
            for &y in &grid {
                if x == y {
                    continue;
                }
                let got = estimate(&[x, y], &opts);
                assert!(got.std_error.is_none());
                let want = rho2_real_closed(x, y).unwrap();
                assert!(
                    (got.value - want).abs() <= 1e-10 * want.abs(),
                    "({x},{y}): {} vs {want}",
                    got.value
                );
            }
        }
        let anchor = estimate(&[0.55f64, 0.3], &opts).value;
        assert!((anchor - 0.0720736439612801).abs() < 1e-14);
        let anchor = estimate(&[0.2f64, -0.4], &opts).value;
        assert!((anchor - 0.09576156091618987).abs() < 1e-14);
    }

    #[test]
    fn pair_density_is_symmetric_in_its_arguments() {
        let opts = BleherDiOptions::default();
        let a = estimate(&[0.3f64, -0.5], &opts).value;
        let b = estimate(&[-0.5f64, 0.3], &opts).value;
        assert!((a - b).abs() <= 1e-13 * a.abs());
    }

    #[test]
    fn triple_point_estimate_is_deterministic() {
        let opts = BleherDiOptions {
            draws: 20_000,
            seed: 7,
            target_rel_error: None,
        };
        let first = estimate(&[0.0f64, 0.3, -0.3], &opts);
        let second = estimate(&[0.0f64, 0.3, -0.3], &opts);
        assert_eq!(first.value, second.value);
        assert_eq!(first.std_error, second.std_error);

        let reseeded = estimate(
            &[0.0f64, 0.3, -0.3],
            &BleherDiOptions { seed: 8, ..opts },
        );
        assert_ne!(first.value, reseeded.value);
    }

    #[test]
    fn triple_point_estimate_agrees_with_pfaffian_density() {
        let opts = BleherDiOptions {
            draws: 1_000_000,
            seed: 1,
            target_rel_error: None,
        };
        for points in [[0.0f64, 0.3, -0.3], [0.1, -0.45, 0.5]] {
            let got = estimate(&points, &opts);
            let se = got.std_error.expect("Monte Carlo reports an error bar");
            let want = pfaffian_reference(&points);
            assert!(
                (got.value - want).abs() <= 4.0 * se,
                "{points:?}: {} vs {want} (se {se})",
                got.value
            );
            assert!(se < 1e-4);
        }
    }

    #[test]
    fn reported_error_bar_matches_cross_seed_scatter() {
        // Independent seeds give independent estimates; their empirical
        // standard deviation must agree with the reported standard error
        // up to the sampling noise of 12 repetitions.
        let points = [0.0f64, 0.3, -0.3];
        let mut values = Vec::new();
        let mut reported = Vec::new();
        for seed in 0..12 {
            let opts = BleherDiOptions {
                draws: 100_000,
                seed,
                target_rel_error: None,
            };
            let est = estimate(&points, &opts);
            values.push(est.value);
            reported.push(est.std_error.unwrap());
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let scatter =
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let typical = reported.iter().sum::<f64>() / n;
        let ratio = scatter / typical;
        assert!(
            (0.5..2.0).contains(&ratio),
            "scatter {scatter:.3e} vs reported {typical:.3e} (ratio {ratio:.2})"
        );
    }

    #[test]
    fn tolerance_gate_fires_when_the_budget_is_too_small() {
        let opts = BleherDiOptions {
            draws: 2_000,
            seed: 3,
            target_rel_error: Some(1e-3),
        };
        let err = bleher_di_rho(&[0.0f64, 0.3, -0.3], &opts).unwrap_err();
        match err {
            ClassicalError::ToleranceNotMet {
                value,
                std_error,
                achieved,
                target,
            } => {
                assert!(value > 0.0);
                assert!(std_error > 0.0);
                assert!(achieved > target);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn default_options_lock_the_contract() {
        let opts = BleherDiOptions::default();
        assert_eq!(opts.draws, 1_000_000);
        assert_eq!(opts.seed, 0);
        assert_eq!(opts.target_rel_error, Some(1e-3));
    }

    #[test]
    fn rejects_bad_points_and_budgets() {
        let opts = BleherDiOptions::default();
        assert!(matches!(
            bleher_di_rho::<f64>(&[], &opts),
            Err(ClassicalError::EmptyPointList)
        ));
        assert!(matches!(
            bleher_di_rho(&[f64::NAN], &opts),
            Err(ClassicalError::NonFinitePoint { index: 0 })
        ));
        assert!(matches!(
            bleher_di_rho(&[0.2, 0.9999999], &opts),
            Err(ClassicalError::PointOutOfDomain { index: 1, .. })
        ));
        assert!(matches!(
            bleher_di_rho(&[0.2, -0.4, 0.2], &opts),
            Err(ClassicalError::CoincidentPoints { i: 0, j: 2 })
        ));
        let starved = BleherDiOptions {
            draws: 1,
            ..BleherDiOptions::default()
        };
        assert!(matches!(
            bleher_di_rho(&[0.0, 0.3, -0.3], &starved),
            Err(ClassicalError::BadDrawBudget { draws: 1 })
        ));
    }
}
