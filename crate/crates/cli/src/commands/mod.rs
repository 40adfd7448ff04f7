//! Subcommand implementations.
//!
//! Every command resolves its parameters as flag > config-file key >
//! built-in default, validates them before any computation, and writes
//! its machine-readable output to `--out` (or stdout when omitted).
//! Human-readable status goes to stdout when the CSV has its own file,
//! to stderr otherwise, so piped CSV stays clean.

pub mod density;
pub mod eval;
pub mod pair;
pub mod sample;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kaczeros::ensembles::{EnsembleConfig, EnsembleKind, Spectrum};

use crate::args::EnsembleArg;
use crate::config::FileConfig;

/// Where a command's CSV goes.
pub enum Output {
    File(BufWriter<File>, PathBuf),
    Stdout(io::Stdout),
}

impl Output {
    pub fn create(out: Option<&Path>) -> Result<Self> {
        match out {
            Some(path) => {
                let file = File::create(path)
                    .with_context(|| format!("cannot create output file {}", path.display()))?;
                Ok(Output::File(BufWriter::new(file), path.to_path_buf()))
            }
            None => Ok(Output::Stdout(io::stdout())),
        }
    }

    pub fn is_file(&self) -> bool {
        matches!(self, Output::File(..))
    }

    /// Destination name for status messages.
    pub fn describe(&self) -> String {
        match self {
            Output::File(_, path) => path.display().to_string(),
            Output::Stdout(_) => "stdout".to_string(),
        }
    }

    pub fn finish(self) -> Result<()> {
        if let Output::File(mut w, path) = self {
            w.flush()
                .with_context(|| format!("cannot finish writing {}", path.display()))?;
        }
        Ok(())
    }
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Output::File(w, _) => w.write(buf),
            Output::Stdout(w) => w.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Output::File(w, _) => w.flush(),
            Output::Stdout(w) => w.flush(),
        }
    }
}

/// Prints a human-readable status line without disturbing CSV piped to
/// stdout.
pub fn status(csv_out: &Output, line: &str) {
    if csv_out.is_file() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

/// Ensemble selection resolved from flag or config key `ensemble`.
pub fn resolve_ensemble(flag: Option<EnsembleArg>, cfg: &FileConfig) -> Result<EnsembleKind> {
    let from_file = match cfg.parsed::<String>("ensemble")? {
        Some(name) => Some(match name.as_str() {
            "truncated" | "truncated-orthogonal" => EnsembleArg::Truncated,
            "kac" => EnsembleArg::Kac,
            "matrix-kac" => EnsembleArg::MatrixKac,
            other => bail!(
                "config key 'ensemble': unknown ensemble '{other}' \
                 (expected truncated, kac, or matrix-kac)"
            ),
        }),
        None => None,
    };
    let arg = flag.or(from_file).unwrap_or(EnsembleArg::Truncated);
    Ok(match arg {
        EnsembleArg::Truncated => EnsembleKind::TruncatedOrthogonal,
        EnsembleArg::Kac => EnsembleKind::Kac,
        EnsembleArg::MatrixKac => EnsembleKind::MatrixKac,
    })
}

/// Shared ensemble-parameter resolution for the sampling commands.
pub struct SampleParams {
    pub config: EnsembleConfig,
}

impl SampleParams {
    pub fn resolve(
        ensemble: Option<EnsembleArg>,
        l: Option<u32>,
        m: Option<usize>,
        n: Option<usize>,
        samples: Option<usize>,
        seed: Option<u64>,
        default_samples: usize,
        cfg: &FileConfig,
    ) -> Result<Self> {
        let kind = resolve_ensemble(ensemble, cfg)?;
        let config = EnsembleConfig {
            kind,
            l: l.or(cfg.parsed("l")?).unwrap_or(1),
            m: m.or(cfg.parsed("m")?).unwrap_or(100),
            n: n.or(cfg.parsed("n")?).unwrap_or(100),
            samples: samples
                .or(cfg.parsed("samples")?)
                .unwrap_or(default_samples),
            seed: seed.or(cfg.parsed("seed")?).unwrap_or(0),
        };
        config.validate()?;
        Ok(SampleParams { config })
    }

    /// Draws the spectra, surfacing ensemble errors with their context.
    pub fn draw(&self) -> Result<Vec<Spectrum<f64>>> {
        kaczeros::ensembles::sample_spectra(&self.config).with_context(|| {
            format!(
                "sampling {} (L={}, M={}, N={}, samples={}, seed={})",
                self.config.kind.name(),
                self.config.l,
                self.config.m,
                self.config.n,
                self.config.samples,
                self.config.seed
            )
        })
    }

    /// One line of draw accounting for status output.
    pub fn tally(&self, spectra: &[Spectrum<f64>]) -> String {
        let reals: usize = spectra.iter().map(|s| s.real.len()).sum();
        let pairs: usize = spectra.iter().map(|s| s.upper.len()).sum();
        let rejections: u64 = spectra.iter().map(|s| u64::from(s.meta.rejections)).sum();
        let mut line = format!(
            "{} draws from {}: {reals} real points, {pairs} conjugate pairs, {rejections} rejected attempts",
            spectra.len(),
            self.config.kind.name(),
        );
        match self.config.kind {
            EnsembleKind::Kac => {
                let outside: usize = spectra.iter().map(|s| s.meta.outside_unit).sum();
                line.push_str(&format!(", {outside} roots outside the unit circle"));
            }
            EnsembleKind::MatrixKac => {
                let filtered: usize = spectra.iter().map(|s| s.meta.filtered_out).sum();
                line.push_str(&format!(", {filtered} roots dropped by the modulus filter"));
            }
            EnsembleKind::TruncatedOrthogonal => {}
        }
        line
    }
}
