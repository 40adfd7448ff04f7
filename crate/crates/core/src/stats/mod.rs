//! Empirical estimators over spectrum streams — real-line and planar
//! densities, pair correlations, real-point counts — and quantitative
//! comparison of binned estimates against analytic references or other
//! samples.
//!
//! All accumulators are mergeable: partitions of a draw stream can be
//! binned independently and combined associatively, and the result is
//! invariant under draw order because only integer counts are summed.

mod compare;
mod counts;
mod histogram;
mod pairs;
mod planar;

pub use compare::{
    compare, compare_samples, write_report_csv, ComparableBins, ComparisonOptions,
    ComparisonReport, BOUNDARY_CUT,
};
pub use counts::{mean_count, mean_real_count, CountSummary};
pub use histogram::{
    cell_averaged_density, real_density_histogram, write_histogram_csv, DensityHistogram,
};
pub use pairs::{
    cell_averaged_pair_density, pair_correlation_estimate, write_pair_csv, PairCorrelation,
};
pub use planar::{
    cell_averaged_planar_density, complex_density_histogram, write_planar_csv, PlanarHistogram,
    PlanarSpec,
};

use thiserror::Error;

use crate::scalar::Real;

/// Failures of the estimators and comparators.
#[derive(Debug, Error)]
pub enum StatsError {
    #[error("histogram bounds must satisfy lo < hi with at least one bin, got [{lo}, {hi}] with {bins} bins")]
    BadHistogramSpec { lo: f64, hi: f64, bins: usize },
    #[error("estimator requires a nonempty draw stream")]
    EmptyStream,
    #[error("binned estimates use different grids and cannot be combined")]
    GridMismatch,
    #[error("reference has {got} values but the estimate has {expected} bins")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cell-average quadrature failed: {detail}")]
    Quadrature { detail: String },
    #[error("failed to write output: {0}")]
    Io(#[from] std::io::Error),
}

/// How a histogram turns counts into reported values. Densities are per
/// draw and per unit length (or unit area), so they estimate the
/// one-point correlation function directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    PerSampleDensity,
}

/// Bounds and resolution of a one-dimensional binning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec<R> {
    pub lo: R,
    pub hi: R,
    pub bins: usize,
    pub normalization: Normalization,
}

impl<R: Real> HistogramSpec<R> {
    /// A per-sample-density binning of `[lo, hi)` into `bins` equal bins.
    pub fn new(lo: R, hi: R, bins: usize) -> Result<Self, StatsError> {
        if !(lo < hi) || bins == 0 {
            return Err(StatsError::BadHistogramSpec {
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
                bins,
            });
        }
        Ok(HistogramSpec {
            lo,
            hi,
            bins,
            normalization: Normalization::PerSampleDensity,
        })
    }

    /// Common width of every bin.
    pub fn width(&self) -> R {
        (self.hi - self.lo) / R::of_usize(self.bins)
    }

    /// Lower and upper edge of bin `i`.
    pub fn edges(&self, i: usize) -> (R, R) {
        let w = self.width();
        let lo = self.lo + w * R::of_usize(i);
        let hi = if i + 1 == self.bins {
            self.hi
        } else {
            self.lo + w * R::of_usize(i + 1)
        };
        (lo, hi)
    }

    /// Index of the bin containing `x`, on the half-open range `[lo, hi)`.
    pub fn bin_of(&self, x: R) -> Option<usize> {
        if x < self.lo || x >= self.hi || !x.is_finite() {
            return None;
        }
        let i = ((x - self.lo) / self.width())
            .to_f64()
            .unwrap_or(f64::NAN) as usize;
        Some(i.min(self.bins - 1))
    }

    /// Whether bin `i` touches the region `|x| >= cut` where finite-size
    /// bias concentrates.
    pub fn touches_boundary(&self, i: usize, cut: R) -> bool {
        let (lo, hi) = self.edges(i);
        lo.abs().max(hi.abs()) >= cut
    }
}
