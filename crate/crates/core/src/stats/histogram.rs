//! One-dimensional density estimation for real points.

use std::io::{self, Write};

use super::{ComparableBins, HistogramSpec, StatsError, BOUNDARY_CUT};
use crate::ensembles::Spectrum;
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;

/// Binned estimate of the mean number of real points per unit length per
/// draw. Counts are exact integers, so accumulators merge associatively
/// and are independent of draw order.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityHistogram<R: Real> {
    spec: HistogramSpec<R>,
    counts: Vec<u64>,
    draws: usize,
}

impl<R: Real> DensityHistogram<R> {
    pub fn new(spec: HistogramSpec<R>) -> Self {
        DensityHistogram {
            counts: vec![0; spec.bins],
            spec,
            draws: 0,
        }
    }

    pub fn spec(&self) -> &HistogramSpec<R> {
        &self.spec
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn count(&self, i: usize) -> u64 {
        self.counts[i]
    }

    /// Bins one draw's real points. Points outside `[lo, hi)` are ignored.
    pub fn record_draw(&mut self, points: &[R]) {
        self.draws += 1;
        for &x in points {
            if let Some(b) = self.spec.bin_of(x) {
                self.counts[b] += 1;
            }
        }
    }

    /// Combines two partial accumulations over the same grid.
    pub fn merge(mut self, other: &Self) -> Result<Self, StatsError> {
        if self.spec != other.spec {
            return Err(StatsError::GridMismatch);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.draws += other.draws;
        Ok(self)
    }

    /// Density estimate in bin `i`: the per-draw count divided by the
    /// bin width (this order keeps integer-exact cases exact).
    pub fn density(&self, i: usize) -> R {
        R::of(self.counts[i] as f64) / R::of_usize(self.draws) / self.spec.width()
    }

    /// Poisson standard error of the density in bin `i`; empty bins get
    /// the conservative one-count error rather than zero.
    pub fn std_error(&self, i: usize) -> R {
        R::of((self.counts[i].max(1)) as f64).sqrt() / R::of_usize(self.draws)
            / self.spec.width()
    }

    /// Mean number of in-range points per draw. This equals
    /// `sum(density * width)` exactly, computed in the cancellation-free
    /// order (total count first, one division).
    pub fn mass(&self) -> R {
        R::of(self.counts.iter().sum::<u64>() as f64) / R::of_usize(self.draws)
    }

    /// View used by the comparison machinery.
    pub fn comparable(&self) -> ComparableBins<R> {
        let cut = R::of(BOUNDARY_CUT);
        ComparableBins {
            estimates: (0..self.spec.bins).map(|i| self.density(i)).collect(),
            std_errors: (0..self.spec.bins).map(|i| self.std_error(i)).collect(),
            populated: self.counts.iter().map(|&c| c > 0).collect(),
            boundary: (0..self.spec.bins)
                .map(|i| self.spec.touches_boundary(i, cut))
                .collect(),
            grid: (0..self.spec.bins)
                .map(|i| self.spec.edges(i).0)
                .chain(std::iter::once(self.spec.hi))
                .collect(),
            draws: self.draws,
        }
    }
}

/// Bins the real points of every spectrum in the stream.
pub fn real_density_histogram<R: Real>(
    spectra: &[Spectrum<R>],
    spec: HistogramSpec<R>,
) -> Result<DensityHistogram<R>, StatsError> {
    if spectra.is_empty() {
        return Err(StatsError::EmptyStream);
    }
    let mut hist = DensityHistogram::new(spec);
    for s in spectra {
        hist.record_draw(&s.real);
    }
    Ok(hist)
}

/// Average of an analytic density over each bin, by adaptive quadrature,
/// for like-for-like comparison with binned estimates.
pub fn cell_averaged_density<R: Real>(
    spec: &HistogramSpec<R>,
    f: impl Fn(R) -> R,
) -> Result<Vec<R>, StatsError> {
    let config = QuadConfig::default();
    (0..spec.bins)
        .map(|i| {
            let (lo, hi) = spec.edges(i);
            let out = integrate(&f, lo, hi, &config).map_err(|e| StatsError::Quadrature {
                detail: e.to_string(),
            })?;
            Ok(out.value / (hi - lo))
        })
        .collect()
}

/// Writes `bin_lo,bin_hi,density,stderr` rows (with header).
pub fn write_histogram_csv<R: Real, W: Write>(
    out: &mut W,
    hist: &DensityHistogram<R>,
) -> io::Result<()> {
    writeln!(out, "bin_lo,bin_hi,density,stderr")?;
    for i in 0..hist.spec().bins {
        let (lo, hi) = hist.spec().edges(i);
        writeln!(
            out,
            "{lo:.16e},{hi:.16e},{:.16e},{:.16e}",
            hist.density(i),
            hist.std_error(i)
        )?;
    }
    Ok(())
}
