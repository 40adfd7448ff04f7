//! Two-dimensional density estimation for upper-half-plane points.

use std::io::{self, Write};

use num_complex::Complex;

use super::{ComparableBins, HistogramSpec, StatsError, BOUNDARY_CUT};
use crate::ensembles::Spectrum;
use crate::quad::{integrate, QuadConfig};
use crate::scalar::Real;

/// Rectangular grid over a region of the plane, one axis spec per
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSpec<R> {
    pub x: HistogramSpec<R>,
    pub y: HistogramSpec<R>,
}

impl<R: Real> PlanarSpec<R> {
    /// Grid over `[x_lo, x_hi) x [y_lo, y_hi)`.
    pub fn new(
        x_lo: R,
        x_hi: R,
        x_bins: usize,
        y_lo: R,
        y_hi: R,
        y_bins: usize,
    ) -> Result<Self, StatsError> {
        Ok(PlanarSpec {
            x: HistogramSpec::new(x_lo, x_hi, x_bins)?,
            y: HistogramSpec::new(y_lo, y_hi, y_bins)?,
        })
    }

    pub fn cells(&self) -> usize {
        self.x.bins * self.y.bins
    }

    pub fn cell_area(&self) -> R {
        self.x.width() * self.y.width()
    }

    /// Flattened cell index, x fastest.
    pub fn cell_of(&self, z: Complex<R>) -> Option<usize> {
        let i = self.x.bin_of(z.re)?;
        let j = self.y.bin_of(z.im)?;
        Some(j * self.x.bins + i)
    }

    /// Cell bounds `(x_lo, x_hi, y_lo, y_hi)` of flattened cell `c`.
    pub fn cell_edges(&self, c: usize) -> (R, R, R, R) {
        let (i, j) = (c % self.x.bins, c / self.x.bins);
        let (x_lo, x_hi) = self.x.edges(i);
        let (y_lo, y_hi) = self.y.edges(j);
        (x_lo, x_hi, y_lo, y_hi)
    }

    /// Whether cell `c` touches the region `|z| >= cut`; the modulus over
    /// a rectangle is maximized at a corner.
    pub fn touches_boundary(&self, c: usize, cut: R) -> bool {
        let (x_lo, x_hi, y_lo, y_hi) = self.cell_edges(c);
        let x = x_lo.abs().max(x_hi.abs());
        let y = y_lo.abs().max(y_hi.abs());
        (x * x + y * y).sqrt() >= cut
    }
}

/// Binned estimate of the mean number of upper-half-plane points per
/// unit area per draw.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarHistogram<R: Real> {
    spec: PlanarSpec<R>,
    counts: Vec<u64>,
    draws: usize,
}

impl<R: Real> PlanarHistogram<R> {
    pub fn new(spec: PlanarSpec<R>) -> Self {
        PlanarHistogram {
            counts: vec![0; spec.cells()],
            spec,
            draws: 0,
        }
    }

    pub fn spec(&self) -> &PlanarSpec<R> {
        &self.spec
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn count(&self, c: usize) -> u64 {
        self.counts[c]
    }

    /// Bins one draw's points; points outside the grid are ignored.
    pub fn record_draw(&mut self, points: &[Complex<R>]) {
        self.draws += 1;
        for &z in points {
            if let Some(c) = self.spec.cell_of(z) {
                self.counts[c] += 1;
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

    /// Area-normalized density estimate in cell `c`.
    pub fn density(&self, c: usize) -> R {
        R::of(self.counts[c] as f64) / R::of_usize(self.draws) / self.spec.cell_area()
    }

    /// Poisson standard error, conservative (one count) on empty cells.
    pub fn std_error(&self, c: usize) -> R {
        R::of((self.counts[c].max(1)) as f64).sqrt() / R::of_usize(self.draws)
            / self.spec.cell_area()
    }

    /// Mean number of in-grid points per draw; equals
    /// `sum(density * area)` exactly in the cancellation-free order.
    pub fn mass(&self) -> R {
        R::of(self.counts.iter().sum::<u64>() as f64) / R::of_usize(self.draws)
    }

    /// View used by the comparison machinery.
    pub fn comparable(&self) -> ComparableBins<R> {
        let cut = R::of(BOUNDARY_CUT);
        let cells = self.spec.cells();
        let mut grid = Vec::with_capacity(4 * cells);
        for c in 0..cells {
            let (a, b, d, e) = self.spec.cell_edges(c);
            grid.extend_from_slice(&[a, b, d, e]);
        }
        ComparableBins {
            estimates: (0..cells).map(|c| self.density(c)).collect(),
            std_errors: (0..cells).map(|c| self.std_error(c)).collect(),
            populated: self.counts.iter().map(|&c| c > 0).collect(),
            boundary: (0..cells)
                .map(|c| self.spec.touches_boundary(c, cut))
                .collect(),
            grid,
            draws: self.draws,
        }
    }
}

/// Bins the upper-half-plane representatives of every spectrum.
pub fn complex_density_histogram<R: Real>(
    spectra: &[Spectrum<R>],
    spec: PlanarSpec<R>,
) -> Result<PlanarHistogram<R>, StatsError> {
    if spectra.is_empty() {
        return Err(StatsError::EmptyStream);
    }
    let mut hist = PlanarHistogram::new(spec);
    for s in spectra {
        hist.record_draw(&s.upper);
    }
    Ok(hist)
}

/// Cell averages of an analytic planar density over the grid,
/// flattened like [`PlanarHistogram::comparable`] (x fastest).
///
/// `f` is evaluated throughout every cell, including cells flagged as
/// boundary by the comparison machinery, so the whole grid must lie
/// inside `f`'s domain.
pub fn cell_averaged_planar_density<R: Real>(
    spec: &PlanarSpec<R>,
    f: impl Fn(R, R) -> R,
) -> Result<Vec<R>, StatsError> {
    let cfg = QuadConfig::default();
    let mut cells = Vec::with_capacity(spec.cells());
    let area = spec.cell_area();
    for c in 0..spec.cells() {
        let (x_lo, x_hi, y_lo, y_hi) = spec.cell_edges(c);
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
        .map_err(|e| StatsError::Quadrature {
            detail: e.to_string(),
        })?;
        let value = outer.value / area;
        if !value.is_finite() {
            return Err(StatsError::Quadrature {
                detail: format!("inner integral failed on cell {c}"),
            });
        }
        cells.push(value);
    }
    Ok(cells)
}

/// Writes `x_lo,x_hi,y_lo,y_hi,density,stderr` rows (with header).
pub fn write_planar_csv<R: Real, W: Write>(
    out: &mut W,
    hist: &PlanarHistogram<R>,
) -> io::Result<()> {
    writeln!(out, "x_lo,x_hi,y_lo,y_hi,density,stderr")?;
    for c in 0..hist.spec().cells() {
        let (x_lo, x_hi, y_lo, y_hi) = hist.spec().cell_edges(c);
        writeln!(
            out,
            "{x_lo:.16e},{x_hi:.16e},{y_lo:.16e},{y_hi:.16e},{:.16e},{:.16e}",
            hist.density(c),
            hist.std_error(c)
        )?;
    }
    Ok(())
}
