//! Empirical two-point correlation of real points.

use std::io::Write;

use super::{ComparableBins, HistogramSpec, StatsError, BOUNDARY_CUT};
use crate::ensembles::Spectrum;
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;

/// Binned estimate of the mean number of ordered pairs of distinct real
/// points per draw, per unit area of the `(x1, x2)` plane.
///
/// The grid is the square of one axis spec; self-pairs (`j == l`) are
/// never counted, so the diagonal cells estimate genuine two-point
/// structure rather than the one-point density.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelation<R: Real> {
    axis: HistogramSpec<R>,
    counts: Vec<u64>,
    draws: usize,
}

impl<R: Real> PairCorrelation<R> {
    pub fn new(axis: HistogramSpec<R>) -> Self {
        PairCorrelation {
            counts: vec![0; axis.bins * axis.bins],
            axis,
            draws: 0,
        }
    }

    pub fn axis(&self) -> &HistogramSpec<R> {
        &self.axis
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[j * self.axis.bins + i]
    }

    /// Bins every ordered pair of distinct real points of one draw.
    pub fn record_draw(&mut self, reals: &[R]) {
        self.draws += 1;
        let bins: Vec<Option<usize>> = reals.iter().map(|&x| self.axis.bin_of(x)).collect();
        for (j, &bj) in bins.iter().enumerate() {
            let Some(bj) = bj else { continue };
            for (l, &bl) in bins.iter().enumerate() {
                if j == l {
                    continue;
                }
                let Some(bl) = bl else { continue };
                self.counts[bl * self.axis.bins + bj] += 1;
            }
        }
    }

    /// Combines two partial accumulations over the same grid.
    pub fn merge(mut self, other: &Self) -> Result<Self, StatsError> {
        if self.axis != other.axis {
            return Err(StatsError::GridMismatch);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.draws += other.draws;
        Ok(self)
    }

    /// Area-normalized pair density estimate in cell `(i, j)`.
    pub fn estimate(&self, i: usize, j: usize) -> R {
        let w = self.axis.width();
        R::of(self.count(i, j) as f64) / R::of_usize(self.draws) / (w * w)
    }

    /// Poisson standard error, conservative (one count) on empty cells.
    pub fn std_error(&self, i: usize, j: usize) -> R {
        let w = self.axis.width();
        R::of(self.count(i, j).max(1) as f64).sqrt() / R::of_usize(self.draws) / (w * w)
    }

    /// View used by the comparison machinery; cells are flattened with
    /// the first coordinate fastest.
    pub fn comparable(&self) -> ComparableBins<R> {
        let cut = R::of(BOUNDARY_CUT);
        let n = self.axis.bins;
        let edge_flag: Vec<bool> = (0..n).map(|i| self.axis.touches_boundary(i, cut)).collect();
        let mut grid = Vec::with_capacity(n + 1);
        for i in 0..n {
            grid.push(self.axis.edges(i).0);
        }
        grid.push(self.axis.edges(n - 1).1);
        let mut estimates = Vec::with_capacity(n * n);
        let mut std_errors = Vec::with_capacity(n * n);
        let mut populated = Vec::with_capacity(n * n);
        let mut boundary = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                estimates.push(self.estimate(i, j));
                std_errors.push(self.std_error(i, j));
                populated.push(self.count(i, j) > 0);
                boundary.push(edge_flag[i] || edge_flag[j]);
            }
        }
        ComparableBins {
            estimates,
            std_errors,
            populated,
            boundary,
            grid,
            draws: self.draws,
        }
    }
}

/// Accumulates the pair correlation of the real points of a stream of
/// spectra on `axis x axis`.
pub fn pair_correlation_estimate<R: Real>(
    spectra: &[Spectrum<R>],
    axis: HistogramSpec<R>,
) -> Result<PairCorrelation<R>, StatsError> {
    if spectra.is_empty() {
        return Err(StatsError::EmptyStream);
    }
    let mut pairs = PairCorrelation::new(axis);
    for s in spectra {
        pairs.record_draw(&s.real);
    }
    Ok(pairs)
}

/// Cell averages of an analytic pair density over `axis x axis`,
/// flattened with the first coordinate fastest (matching
/// [`PairCorrelation::comparable`]).
pub fn cell_averaged_pair_density<R: Real>(
    axis: &HistogramSpec<R>,
    f: impl Fn(R, R) -> R,
) -> Result<Vec<R>, StatsError> {
    let cfg = QuadConfig::default();
    let quad_err = |e: crate::quad::QuadError<R>| StatsError::Quadrature {
        detail: e.to_string(),
    };
    let mut cells = Vec::with_capacity(axis.bins * axis.bins);
    let area = axis.width() * axis.width();
    for j in 0..axis.bins {
        let (y_lo, y_hi) = axis.edges(j);
        for i in 0..axis.bins {
            let (x_lo, x_hi) = axis.edges(i);
            let outer = integrate(
                |x| {
                    integrate(|y| f(x, y), y_lo, y_hi, &cfg)
                        .map(|o| o.value)
                        .unwrap_or_else(|_| R::nan())
                },
                x_lo,
                x_hi,
                &cfg,
            )
            .map_err(quad_err)?;
            let value = outer.value / area;
            if !value.is_finite() {
                return Err(StatsError::Quadrature {
                    detail: format!("inner integral failed on cell ({i}, {j})"),
                });
            }
            cells.push(value);
        }
    }
    Ok(cells)
}

/// Writes `x1_lo,x1_hi,x2_lo,x2_hi,estimate,stderr,analytic` rows (with
/// header). `analytic` must be flattened like
/// [`PairCorrelation::comparable`].
pub fn write_pair_csv<R: Real, W: Write>(
    out: &mut W,
    pairs: &PairCorrelation<R>,
    analytic: &[R],
) -> Result<(), StatsError> {
    let n = pairs.axis().bins;
    if analytic.len() != n * n {
        return Err(StatsError::LengthMismatch {
            expected: n * n,
            got: analytic.len(),
        });
    }
    writeln!(out, "x1_lo,x1_hi,x2_lo,x2_hi,estimate,stderr,analytic")?;
    for j in 0..n {
        let (y_lo, y_hi) = pairs.axis().edges(j);
        for i in 0..n {
            let (x_lo, x_hi) = pairs.axis().edges(i);
            writeln!(
                out,
                "{x_lo:.16e},{x_hi:.16e},{y_lo:.16e},{y_hi:.16e},{:.16e},{:.16e},{:.16e}",
                pairs.estimate(i, j),
                pairs.std_error(i, j),
                analytic[j * n + i]
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{
        draw_rng, truncated_block_spectrum, EnsembleKind, Spectrum, SpectrumMeta,
    };
    use crate::kernels::rho2_real_closed;
    use crate::stats::{compare, ComparisonOptions};

    fn stream_of(reals: Vec<Vec<f64>>) -> Vec<Spectrum<f64>> {
        reals
            .into_iter()
            .map(|real| Spectrum {
                real,
                upper: Vec::new(),
                meta: SpectrumMeta::new(EnsembleKind::Kac, 0),
            })
            .collect()
    }

    #[test]
    fn single_points_produce_no_pairs() {
        let axis = HistogramSpec::new(-1.0, 1.0, 4).unwrap();
        let pairs =
            pair_correlation_estimate(&stream_of(vec![vec![0.1], vec![-0.4], vec![0.9]]), axis)
                .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(pairs.count(i, j), 0);
            }
        }
    }

    #[test]
    fn ordered_pairs_fill_symmetric_cells() {
        let axis = HistogramSpec::new(0.0, 1.0, 2).unwrap();
        // One draw with points in different bins: both orders counted.
        let pairs = pair_correlation_estimate(&stream_of(vec![vec![0.2, 0.7]]), axis).unwrap();
        assert_eq!(pairs.count(0, 1), 1);
        assert_eq!(pairs.count(1, 0), 1);
        assert_eq!(pairs.count(0, 0), 0);
        assert_eq!(pairs.count(1, 1), 0);
        // Three points in one bin: 3 * 2 ordered pairs, no self-pairs.
        let triple = pair_correlation_estimate(&stream_of(vec![vec![0.1, 0.2, 0.3]]), axis)
            .unwrap();
        assert_eq!(triple.count(0, 0), 6);
    }

    #[test]
    fn merge_matches_direct_accumulation() {
        let axis = HistogramSpec::new(-0.8, 0.8, 4).unwrap();
        let spectra: Vec<Spectrum<f64>> = (0..60)
            .map(|d| truncated_block_spectrum(1, 20, &mut draw_rng(61, d)).unwrap())
            .collect();
        let a = pair_correlation_estimate(&spectra[..25], axis).unwrap();
        let b = pair_correlation_estimate(&spectra[25..], axis).unwrap();
        let direct = pair_correlation_estimate(&spectra, axis).unwrap();
        assert_eq!(a.merge(&b).unwrap(), direct);
        let foreign = PairCorrelation::new(HistogramSpec::new(-0.8, 0.8, 5).unwrap());
        assert!(matches!(
            direct.merge(&foreign),
            Err(StatsError::GridMismatch)
        ));
    }

    #[test]
    fn cell_averages_match_a_separable_product() {
        // f(x, y) = x * y averages to the product of interval midpoints.
        let axis = HistogramSpec::new(0.0, 1.0, 2).unwrap();
        let cells = cell_averaged_pair_density(&axis, |x: f64, y: f64| x * y).unwrap();
        let mids = [0.25, 0.75];
        for j in 0..2 {
            for i in 0..2 {
                assert!((cells[j * 2 + i] - mids[i] * mids[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncated_pairs_match_the_limiting_two_point_density() {
        let axis = HistogramSpec::new(-0.5, 0.5, 4).unwrap();
        let spectra: Vec<Spectrum<f64>> = (0..1500)
            .map(|d| truncated_block_spectrum(1, 60, &mut draw_rng(62, d)).unwrap())
            .collect();
        let pairs = pair_correlation_estimate(&spectra, axis).unwrap();
        let reference =
            cell_averaged_pair_density(&axis, |x, y| rho2_real_closed(x, y).unwrap()).unwrap();
        let report = compare(
            &pairs.comparable(),
            &reference,
            &ComparisonOptions::default(),
        )
        .unwrap();
        assert!(
            report.pass,
            "sup deviation {:.2} sigma at cell {:?}",
            report.sup_sigma, report.worst_bin
        );
    }

    #[test]
    #[ignore = "full-scale pair comparison; run on demand"]
    fn truncated_pairs_match_the_limit_at_scale() {
        let axis = HistogramSpec::new(-0.6, 0.6, 6).unwrap();
        let spectra: Vec<Spectrum<f64>> = (0..30_000)
            .map(|d| truncated_block_spectrum(1, 100, &mut draw_rng(63, d)).unwrap())
            .collect();
        let pairs = pair_correlation_estimate(&spectra, axis).unwrap();
        let reference =
            cell_averaged_pair_density(&axis, |x, y| rho2_real_closed(x, y).unwrap()).unwrap();
        let report = compare(
            &pairs.comparable(),
            &reference,
            &ComparisonOptions::default(),
        )
        .unwrap();
        assert!(
            report.pass,
            "sup deviation {:.2} sigma at cell {:?}",
            report.sup_sigma, report.worst_bin
        );
    }

    #[test]
    fn pair_csv_includes_the_analytic_column() {
        let axis = HistogramSpec::new(0.0, 1.0, 2).unwrap();
        let pairs = pair_correlation_estimate(&stream_of(vec![vec![0.2, 0.7]]), axis).unwrap();
        let analytic = vec![1.0, 2.0, 3.0, 4.0];
        let mut buf = Vec::new();
        write_pair_csv(&mut buf, &pairs, &analytic).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("x1_lo,x1_hi,x2_lo,x2_hi,estimate,stderr,analytic\n"));
        assert!(write_pair_csv(&mut Vec::new(), &pairs, &analytic[..3]).is_err());
    }
}
