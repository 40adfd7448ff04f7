//! `sample`: draw spectra and stream them as CSV.

use std::io::Write;

use anyhow::Result;
use kaczeros::ensembles::write_spectra_csv;

use super::{status, Output, SampleParams};
use crate::args::SampleArgs;
use crate::config::FileConfig;

pub fn run(args: &SampleArgs, cfg: &FileConfig) -> Result<bool> {
    let params = SampleParams::resolve(
        args.ensemble,
        args.l,
        args.m,
        args.n,
        args.samples,
        args.seed,
        100,
        cfg,
    )?;
    let spectra = params.draw()?;

    let mut out = Output::create(args.out.as_deref())?;
    write_spectra_csv(&spectra, &mut out)?;
    out.flush()?;
    status(
        &out,
        &format!("{}; wrote {}", params.tally(&spectra), out.describe()),
    );
    out.finish()?;
    Ok(true)
}
