//! Command-line surface: subcommands, flags, and their value types.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_complex, parse_grid, GridSpec};

/// Samplers, analytic evaluators, and verification suites for the
/// spectral statistics shared by truncated Haar-orthogonal matrices and
/// high-degree random polynomials with iid Gaussian coefficients.
#[derive(Debug, Parser)]
#[command(name = "kaczeros", version)]
pub struct Cli {
    /// Worker threads (falls back to KACZEROS_THREADS, then all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Plain-text key=value file supplying defaults; explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw spectra from an ensemble and write them as CSV
    Sample(SampleArgs),
    /// Evaluate an analytic correlation function at given points
    Eval(EvalArgs),
    /// Run a verification suite and report pass/fail per check
    Verify(VerifyArgs),
    /// Estimate the real-line (or planar) spectral density empirically
    Density(DensityArgs),
    /// Estimate the two-point correlation of real points empirically
    Pair(PairArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    /// Bottom-right M x M block of an (L+M) x (L+M) Haar-orthogonal matrix
    #[value(alias = "truncated-orthogonal")]
    Truncated,
    /// Real roots and conjugate pairs of a degree-N iid Gaussian polynomial
    Kac,
    /// Matrix polynomial with L x L iid Gaussian coefficient blocks
    MatrixKac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Pfaffian of the assembled kernel matrix (any point mix)
    Pfaffian,
    /// Gaussian-expectation route (real points; Monte Carlo above two)
    BleherDi,
    /// Hafnian route (complex points)
    Prosen,
    /// Low-order closed forms
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    /// Determinant identity relating block spectra to a characteristic polynomial
    Identity,
    /// Skew-orthogonality pattern of the quadrature inner products
    SkewOrth,
    /// Finite-truncation kernels converging to the limiting kernels
    Convergence,
    /// Cross-method agreement of the analytic evaluators
    Equivalence,
    /// Sampled densities against the analytic predictions
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Coarse,
    Fine,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Ensemble to draw from
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,

    /// Block order L
    #[arg(long = "L", value_name = "L")]
    pub l: Option<u32>,

    /// Truncation size M (truncated ensemble; must be even)
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,

    /// Polynomial degree N (kac and matrix-kac ensembles)
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,

    /// Number of independent draws
    #[arg(long)]
    pub samples: Option<usize>,

    /// Master seed; draw i uses deterministic sub-stream i
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Analytic formulation to evaluate
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,

    /// Block order L
    #[arg(long = "L", value_name = "L")]
    pub l: Option<u32>,

    /// Evaluate the M-truncated kernels instead of the limit (pfaffian only)
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,

    /// Real point in (-1, 1); repeat for higher-order correlations
    #[arg(long = "real", value_name = "X")]
    pub real: Vec<f64>,

    /// Complex point as a+bi (e.g. 0.0+0.3i); repeatable
    #[arg(long = "complex", value_name = "A+BI", value_parser = parse_complex)]
    pub complex: Vec<num_complex::Complex<f64>>,

    /// Seed for Monte Carlo estimates (bleher-di above two points)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Monte Carlo draw budget (bleher-di above two points)
    #[arg(long)]
    pub draws: Option<u64>,

    /// Required relative standard error for Monte Carlo estimates;
    /// 0 disables the requirement
    #[arg(long = "target-rel-error", value_name = "REL")]
    pub target_rel_error: Option<f64>,

    /// Also write the result as CSV to this path
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run
    #[arg(long, value_enum)]
    pub suite: Option<SuiteArg>,

    /// Block order L
    #[arg(long = "L", value_name = "L")]
    pub l: Option<u32>,

    /// Matrix/truncation size M
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,

    /// Polynomial degree N (empirical suite, kac ensemble)
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,

    /// Independent trials (identity suite)
    #[arg(long)]
    pub trials: Option<usize>,

    /// Largest polynomial pair index checked (skew-orth suite)
    #[arg(long)]
    pub jmax: Option<u32>,

    /// Grid resolution for grid-based suites
    #[arg(long, value_enum)]
    pub grid: Option<GridArg>,

    /// Ensemble for the empirical suite
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,

    /// Draws for the empirical suite
    #[arg(long)]
    pub samples: Option<usize>,

    /// Master seed for randomized checks
    #[arg(long)]
    pub seed: Option<u64>,

    /// Write the machine-readable report CSV here (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Ensemble to sample
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,

    /// Block order L
    #[arg(long = "L", value_name = "L")]
    pub l: Option<u32>,

    /// Truncation size M (truncated ensemble; must be even)
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,

    /// Polynomial degree N (kac and matrix-kac ensembles)
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,

    /// Number of independent draws
    #[arg(long)]
    pub samples: Option<usize>,

    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,

    /// Real-axis binning as lo:hi:bins (e.g. -0.9:0.9:12)
    #[arg(long, value_name = "LO:HI:BINS", value_parser = parse_grid)]
    pub grid: Option<GridSpec>,

    /// Imaginary-axis binning as lo:hi:bins; switches to the planar
    /// density of the complex conjugate-pair representatives
    #[arg(long, value_name = "LO:HI:BINS", value_parser = parse_grid)]
    pub ygrid: Option<GridSpec>,

    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Ensemble to sample
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,

    /// Block order L
    #[arg(long = "L", value_name = "L")]
    pub l: Option<u32>,

    /// Truncation size M (truncated ensemble; must be even)
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,

    /// Polynomial degree N (kac and matrix-kac ensembles)
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,

    /// Number of independent draws
    #[arg(long)]
    pub samples: Option<usize>,

    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,

    /// Axis binning as lo:hi:bins, used for both coordinates
    #[arg(long, value_name = "LO:HI:BINS", value_parser = parse_grid)]
    pub grid: Option<GridSpec>,

    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
