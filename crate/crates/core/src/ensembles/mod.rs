//! Seeded Monte Carlo samplers for the two ensembles whose spectral
//! statistics this crate computes analytically:
//!
//! * [`truncated_block_spectrum`]: eigenvalues of the bottom-right `M x M`
//!   block of an `(L+M) x (L+M)` Haar-orthogonal matrix;
//! * [`kac_spectrum`] / [`matrix_kac_spectrum`]: roots of random
//!   polynomials with iid standard Gaussian scalar (or `L x L` matrix)
//!   coefficients;
//!
//! plus [`verify_determinant_identity`], the numeric check of the block
//! determinant identity connecting the two models, and a CSV writer for
//! spectrum streams.
//!
//! Every sampler takes a caller-supplied generator; [`sample_spectra`]
//! derives one independent sub-stream per draw from `(seed, draw index)`,
//! so streams are bit-identical regardless of scheduling.

mod classify;
mod haar;
mod identity;
mod kac;
mod matrix_kac;
mod truncated;

pub use classify::{classify_roots, classify_roots_with, CLASSIFICATION_TOL};
pub use haar::haar_orthogonal;
pub use identity::{verify_determinant_identity, IdentityCheck};
pub use kac::{kac_real_count, kac_real_zeros_in, kac_spectrum};
pub use matrix_kac::{
    matrix_kac_spectrum, matrix_kac_spectrum_filtered, LEADING_BLOCK_COND_LIMIT,
    MATRIX_KAC_DEFAULT_DELTA,
};
pub use truncated::truncated_block_spectrum;

use std::io;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::scalar::Real;

/// How many times a sampler redraws after a rejection (degenerate leading
/// coefficient, eigen-solver non-convergence, modulus bound violation)
/// before giving up.
pub(crate) const MAX_RESAMPLES: u32 = 64;

/// Moduli above `1 + 1e-10` in a truncated-orthogonal spectrum are
/// impossible for a contraction and mark a solver failure.
pub(crate) const CONTRACTION_SLACK: f64 = 1e-10;

/// Failures of the ensemble samplers.
#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("block size L must be at least 1")]
    BadBlockOrder,
    #[error("truncation size M must be positive and even, got {m}")]
    BadTruncation { m: usize },
    #[error("degree cutoff N must be at least 1")]
    BadDegree,
    #[error("matrix dimension must be at least 1")]
    BadMatrixSize,
    #[error("sample count must be at least 1")]
    BadSampleCount,
    #[error("filter margin must lie in [0, 1), got {delta}")]
    BadFilterMargin { delta: f64 },
    #[error("window must satisfy -1 < lo < hi < 1, got [{lo}, {hi}]")]
    BadWindow { lo: f64, hi: f64 },
    #[error("|z| must be < 1, got {modulus}")]
    OutsideDisk { modulus: f64 },
    #[error("complex roots failed to pair into conjugates ({positive} up vs {negative} down)")]
    PairingFailed { positive: usize, negative: usize },
    #[error("{what} still rejected after {attempts} resamples")]
    TooManyResamples { what: &'static str, attempts: u32 },
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
}

/// Which ensemble a configuration or spectrum refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    TruncatedOrthogonal,
    Kac,
    MatrixKac,
}

impl EnsembleKind {
    /// Stable lowercase name, matching the CLI and CSV vocabulary.
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::TruncatedOrthogonal => "truncated-orthogonal",
            EnsembleKind::Kac => "kac",
            EnsembleKind::MatrixKac => "matrix-kac",
        }
    }
}

/// Full description of a sampling run.
#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    /// Block size (truncated-orthogonal and matrix-Kac).
    pub l: u32,
    /// Truncation size (truncated-orthogonal); must be even.
    pub m: usize,
    /// Polynomial degree cutoff (Kac and matrix-Kac).
    pub n: usize,
    /// Number of draws.
    pub samples: usize,
    /// Master seed; draw `i` uses sub-stream `i` of this seed.
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            kind: EnsembleKind::TruncatedOrthogonal,
            l: 1,
            m: 100,
            n: 200,
            samples: 1,
            seed: 0,
        }
    }
}

impl EnsembleConfig {
    /// Checks the parameter invariants for the configured kind.
    pub fn validate(&self) -> Result<(), EnsembleError> {
        if self.l == 0 {
            return Err(EnsembleError::BadBlockOrder);
        }
        if self.samples == 0 {
            return Err(EnsembleError::BadSampleCount);
        }
        match self.kind {
            EnsembleKind::TruncatedOrthogonal => {
                if self.m == 0 || !self.m.is_multiple_of(2) {
                    return Err(EnsembleError::BadTruncation { m: self.m });
                }
            }
            EnsembleKind::Kac | EnsembleKind::MatrixKac => {
                if self.n == 0 {
                    return Err(EnsembleError::BadDegree);
                }
            }
        }
        Ok(())
    }
}

/// Where a [`Spectrum`] came from and what happened while drawing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumMeta {
    pub kind: EnsembleKind,
    /// Index of this draw within its run (set by [`sample_spectra`]).
    pub draw_index: usize,
    /// Rejected attempts before this draw succeeded.
    pub rejections: u32,
    /// Kac only: number of roots (conjugates counted separately) with
    /// modulus above 1. They stay in `real`/`upper` — a root is outside
    /// exactly when its modulus exceeds 1 — and limiting-process
    /// comparisons should restrict to the inside.
    pub outside_unit: usize,
    /// Matrix-Kac only: roots dropped by the `|x| < 1 - delta` filter.
    pub filtered_out: usize,
}

impl SpectrumMeta {
    pub(crate) fn new(kind: EnsembleKind, rejections: u32) -> Self {
        Self {
            kind,
            draw_index: 0,
            rejections,
            outside_unit: 0,
            filtered_out: 0,
        }
    }
}

/// One draw's spectrum: real eigenvalues/roots plus one upper-half-plane
/// representative per complex-conjugate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<R: Real> {
    pub real: Vec<R>,
    pub upper: Vec<Complex<R>>,
    pub meta: SpectrumMeta,
}

impl<R: Real> Spectrum<R> {
    /// Size of the full root multiset (conjugates counted).
    pub fn total_size(&self) -> usize {
        self.real.len() + 2 * self.upper.len()
    }
}

/// The generator for draw `index` of a run seeded with `seed`: sub-stream
/// `index` of the ChaCha stream family for `seed`. Callers running their
/// own draw loops should use this so results stay reproducible from the
/// single master seed and independent across indices.
pub fn draw_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Draws `config.samples` independent spectra. Draw `i` uses generator
/// sub-stream `i`, so the result is bit-identical for a given config no
/// matter how the work is scheduled.
pub fn sample_spectra<R: Real>(config: &EnsembleConfig) -> Result<Vec<Spectrum<R>>, EnsembleError> {
    config.validate()?;
    (0..config.samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = draw_rng(config.seed, index);
            let mut spectrum = match config.kind {
                EnsembleKind::TruncatedOrthogonal => {
                    truncated_block_spectrum(config.l, config.m, &mut rng)?
                }
                EnsembleKind::Kac => kac_spectrum(config.n, &mut rng)?,
                EnsembleKind::MatrixKac => matrix_kac_spectrum(config.l, config.n, &mut rng)?,
            };
            spectrum.meta.draw_index = index;
            Ok(spectrum)
        })
        .collect()
}

/// Writes a spectrum stream as CSV with columns
/// `draw_index,kind,re,im` (one representative per conjugate pair).
pub fn write_spectra_csv<R: Real, W: io::Write>(
    spectra: &[Spectrum<R>],
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "draw_index,kind,re,im")?;
    for spectrum in spectra {
        let draw = spectrum.meta.draw_index;
        for &x in &spectrum.real {
            writeln!(out, "{draw},real,{x:.16e},{:.16e}", R::zero())?;
        }
        for &z in &spectrum.upper {
            writeln!(out, "{draw},complex,{:.16e},{:.16e}", z.re, z.im)?;
        }
    }
    Ok(())
}
