//! Statistical comparison of binned estimates against analytic
//! references or against other binned estimates.

use std::io::{self, Write};

use super::StatsError;
use crate::scalar::Real;

/// Bins whose range reaches a coordinate of this modulus are treated as
/// boundary bins: estimates there mix bulk and edge behaviour, so they
/// are excluded from pass/fail decisions by default.
pub const BOUNDARY_CUT: f64 = 0.95;

/// Grid-stamped view of a binned estimate, ready for comparison.
///
/// `grid` lists the geometry of every bin (edge coordinates, in a fixed
/// per-container order); two views are comparable only when their grids
/// match exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparableBins<R> {
    pub estimates: Vec<R>,
    pub std_errors: Vec<R>,
    pub populated: Vec<bool>,
    pub boundary: Vec<bool>,
    pub grid: Vec<R>,
    pub draws: usize,
}

/// Options controlling the pass/fail rule.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonOptions<R> {
    /// The comparison passes when every included bin deviates by at
    /// most this many standard errors.
    pub sigma_multiple: R,
    /// Include bins flagged as boundary bins in the decision.
    pub include_boundary: bool,
}

impl<R: Real> Default for ComparisonOptions<R> {
    fn default() -> Self {
        ComparisonOptions {
            sigma_multiple: R::of(3.0),
            include_boundary: false,
        }
    }
}

/// Outcome of a binned comparison.
#[derive(Debug, Clone)]
pub struct ComparisonReport<R> {
    /// Largest deviation over included bins, in standard-error units.
    pub sup_sigma: R,
    /// Index of the bin attaining `sup_sigma`, if any bin was included.
    pub worst_bin: Option<usize>,
    /// Sum of squared deviations over included populated bins.
    pub chi_square: R,
    /// Number of included populated bins (degrees of freedom for
    /// `chi_square`, up to estimated parameters).
    pub dof: usize,
    /// Number of bins excluded because they were flagged as boundary.
    pub excluded_boundary: usize,
    /// Draw count behind the estimates (the smaller side for
    /// two-sample comparisons).
    pub sample_count: usize,
    /// The threshold the sup deviation was held to.
    pub sigma_multiple: R,
    /// Whether every included bin stayed within the threshold.
    pub pass: bool,
    /// Caveat about multiple testing across bins.
    pub note: String,
}

fn build_report<R: Real>(
    deviations: &[Option<R>],
    populated: &[bool],
    excluded_boundary: usize,
    sample_count: usize,
    opts: &ComparisonOptions<R>,
) -> ComparisonReport<R> {
    let mut sup_sigma = R::zero();
    let mut worst_bin = None;
    let mut chi_square = R::zero();
    let mut dof = 0usize;
    let mut included = 0usize;
    for (i, dev) in deviations.iter().enumerate() {
        let Some(d) = *dev else { continue };
        included += 1;
        if worst_bin.is_none() || d > sup_sigma {
            sup_sigma = d;
            worst_bin = Some(i);
        }
        if populated[i] {
            chi_square += d * d;
            dof += 1;
        }
    }
    let pass = worst_bin.is_none() || sup_sigma <= opts.sigma_multiple;
    ComparisonReport {
        sup_sigma,
        worst_bin,
        chi_square,
        dof,
        excluded_boundary,
        sample_count,
        sigma_multiple: opts.sigma_multiple,
        pass,
        note: format!(
            "sup taken over {included} bins; with that many simultaneous tests, \
             occasional excursions past {:.1} standard errors are expected by chance \
             (no multiplicity correction applied)",
            opts.sigma_multiple.to_f64().unwrap_or(f64::NAN)
        ),
    }
}

/// Compares a binned estimate against per-bin reference values.
///
/// `reference` must provide one value per bin (use cell averaging to
/// turn an analytic density into per-bin values). Deviations are
/// `|estimate - reference| / std_error`; the comparison passes when the
/// largest deviation over included bins is at most
/// `opts.sigma_multiple`.
pub fn compare<R: Real>(
    estimate: &ComparableBins<R>,
    reference: &[R],
    opts: &ComparisonOptions<R>,
) -> Result<ComparisonReport<R>, StatsError> {
    let bins = estimate.estimates.len();
    if reference.len() != bins {
        return Err(StatsError::LengthMismatch {
            expected: bins,
            got: reference.len(),
        });
    }
    let mut deviations = Vec::with_capacity(bins);
    let mut excluded = 0usize;
    for i in 0..bins {
        if estimate.boundary[i] && !opts.include_boundary {
            excluded += 1;
            deviations.push(None);
        } else {
            let d = (estimate.estimates[i] - reference[i]).abs() / estimate.std_errors[i];
            deviations.push(Some(d));
        }
    }
    Ok(build_report(
        &deviations,
        &estimate.populated,
        excluded,
        estimate.draws,
        opts,
    ))
}

/// Compares two binned estimates of the same quantity on the same grid.
///
/// Per-bin uncertainties combine in quadrature. A bin counts as
/// populated when either side saw a point there, and as boundary when
/// either side flags it.
pub fn compare_samples<R: Real>(
    a: &ComparableBins<R>,
    b: &ComparableBins<R>,
    opts: &ComparisonOptions<R>,
) -> Result<ComparisonReport<R>, StatsError> {
    if a.grid != b.grid || a.estimates.len() != b.estimates.len() {
        return Err(StatsError::GridMismatch);
    }
    let bins = a.estimates.len();
    let mut deviations = Vec::with_capacity(bins);
    let mut populated = Vec::with_capacity(bins);
    let mut excluded = 0usize;
    for i in 0..bins {
        populated.push(a.populated[i] || b.populated[i]);
        if (a.boundary[i] || b.boundary[i]) && !opts.include_boundary {
            excluded += 1;
            deviations.push(None);
        } else {
            let sigma = (a.std_errors[i] * a.std_errors[i]
                + b.std_errors[i] * b.std_errors[i])
                .sqrt();
            deviations.push(Some((a.estimates[i] - b.estimates[i]).abs() / sigma));
        }
    }
    Ok(build_report(
        &deviations,
        &populated,
        excluded,
        a.draws.min(b.draws),
        opts,
    ))
}

/// Writes a `metric,value,threshold,pass` summary (with header).
///
/// The chi-square row's threshold (`dof + 3 * sqrt(2 * dof)`) is
/// informational; the overall verdict is the sup-sigma row.
pub fn write_report_csv<R: Real, W: Write>(
    out: &mut W,
    report: &ComparisonReport<R>,
) -> io::Result<()> {
    writeln!(out, "metric,value,threshold,pass")?;
    writeln!(
        out,
        "sup_sigma,{:.16e},{:.16e},{}",
        report.sup_sigma, report.sigma_multiple, report.pass
    )?;
    let dof = report.dof as f64;
    let chi_threshold = dof + 3.0 * (2.0 * dof).sqrt();
    writeln!(
        out,
        "chi_square,{:.16e},{chi_threshold:.16e},{}",
        report.chi_square,
        report.chi_square.to_f64().unwrap_or(f64::NAN) <= chi_threshold
    )?;
    Ok(())
}
