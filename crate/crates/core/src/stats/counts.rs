//! Summary statistics for per-draw counts.

use super::StatsError;
use crate::ensembles::Spectrum;
use crate::scalar::Real;

/// Mean of a per-draw count with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSummary<R> {
    pub mean: R,
    pub std_error: R,
    pub draws: usize,
}

/// Mean and standard error of a stream of counts.
///
/// The standard error is the sample standard deviation (with the
/// `n - 1` denominator) divided by `sqrt(n)`; a single draw reports a
/// standard error of zero, and a constant stream reports exactly zero.
pub fn mean_count<R: Real>(counts: &[usize]) -> Result<CountSummary<R>, StatsError> {
    if counts.is_empty() {
        return Err(StatsError::EmptyStream);
    }
    let n = R::of_usize(counts.len());
    let mean = counts.iter().map(|&c| R::of_usize(c)).sum::<R>() / n;
    let std_error = if counts.len() < 2 {
        R::zero()
    } else {
        let ss = counts
            .iter()
            .map(|&c| {
                let d = R::of_usize(c) - mean;
                d * d
            })
            .sum::<R>();
        (ss / (n - R::one())).sqrt() / n.sqrt()
    };
    Ok(CountSummary {
        mean,
        std_error,
        draws: counts.len(),
    })
}

/// Mean number of real points per draw across a stream of spectra.
pub fn mean_real_count<R: Real>(spectra: &[Spectrum<R>]) -> Result<CountSummary<R>, StatsError> {
    let counts: Vec<usize> = spectra.iter().map(|s| s.real.len()).collect();
    mean_count(&counts)
}
