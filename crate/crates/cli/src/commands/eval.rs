//! `eval`: evaluate one analytic correlation value at a point tuple.

use std::io::Write;

use anyhow::{bail, Context, Result};
use num_complex::Complex;

use kaczeros::classical::{bleher_di_rho, prosen_rho, BleherDiOptions};
use kaczeros::kernels::{
    rho1_complex_closed, rho1_real_closed, rho2_real_closed, rho_pfaffian, KernelSet, PointConfig,
};

use super::{status, Output};
use crate::args::{EvalArgs, MethodArg};
use crate::config::{parse_complex, FileConfig};

pub fn run(args: &EvalArgs, cfg: &FileConfig) -> Result<bool> {
    let method = args
        .method
        .or(match cfg.parsed::<String>("method")?.as_deref() {
            Some("pfaffian") => Some(MethodArg::Pfaffian),
            Some("bleher-di") => Some(MethodArg::BleherDi),
            Some("prosen") => Some(MethodArg::Prosen),
            Some("closed-form") => Some(MethodArg::ClosedForm),
            Some(other) => bail!(
                "config key 'method': unknown method '{other}' \
                 (expected pfaffian, bleher-di, prosen, or closed-form)"
            ),
            None => None,
        })
        .unwrap_or(MethodArg::Pfaffian);
    let l: u32 = args.l.or(cfg.parsed("l")?).unwrap_or(1);
    let m: Option<usize> = args.m.or(cfg.parsed("m")?);

    let reals: Vec<f64> = if args.real.is_empty() {
        cfg.parsed_list("real", |s| {
            s.parse::<f64>().map_err(|e| format!("'{s}': {e}"))
        })?
        .unwrap_or_default()
    } else {
        args.real.clone()
    };
    let complexes: Vec<Complex<f64>> = if args.complex.is_empty() {
        cfg.parsed_list("complex", parse_complex)?.unwrap_or_default()
    } else {
        args.complex.clone()
    };
    if reals.is_empty() && complexes.is_empty() {
        bail!("provide at least one --real or --complex point to evaluate at");
    }
    let (k1, k2) = (reals.len(), complexes.len());

    let (label, value, std_error): (&str, f64, Option<f64>) = match method {
        MethodArg::Pfaffian => {
            let kernels = match m {
                Some(m) => KernelSet::finite(l, m)?,
                None => KernelSet::limiting(l)?,
            };
            let points = PointConfig::new(&reals, &complexes)?;
            ("pfaffian", rho_pfaffian(&kernels, &points)?, None)
        }
        MethodArg::ClosedForm => {
            let value = match (k1, k2) {
                (1, 0) => rho1_real_closed(l, reals[0])?,
                (2, 0) if l == 1 => rho2_real_closed(reals[0], reals[1])?,
                (0, 1) if l == 1 => rho1_complex_closed(complexes[0])?,
                _ => bail!(
                    "no closed form for {k1} real and {k2} complex points at L={l}; \
                     closed forms cover one real point (any L), and two real or one \
                     complex point at L=1 — use --method pfaffian instead"
                ),
            };
            ("closed-form", value, None)
        }
        MethodArg::BleherDi => {
            if k2 != 0 {
                bail!("--method bleher-di takes real points only; use --method prosen or pfaffian for complex points");
            }
            let opts = BleherDiOptions {
                draws: args.draws.or(cfg.parsed("draws")?).unwrap_or_else(|| {
                    BleherDiOptions::default().draws
                }),
                seed: args.seed.or(cfg.parsed("seed")?).unwrap_or(0),
                target_rel_error: match args
                    .target_rel_error
                    .or(cfg.parsed("target_rel_error")?)
                {
                    Some(t) if t <= 0.0 => None,
                    Some(t) => Some(t),
                    None => BleherDiOptions::default().target_rel_error,
                },
            };
            let estimate = bleher_di_rho(&reals, &opts).with_context(|| {
                format!("gaussian-expectation evaluation at {k1} real points")
            })?;
            (
                "bleher-di",
                estimate.value,
                estimate.std_error,
            )
        }
        MethodArg::Prosen => {
            if k1 != 0 {
                bail!("--method prosen takes complex points only; use --method bleher-di or pfaffian for real points");
            }
            ("prosen", prosen_rho(&complexes)?, None)
        }
    };

    let mode = match (method, m) {
        (MethodArg::Pfaffian, Some(m)) => format!("finite-M{m}"),
        _ => "limiting".to_string(),
    };

    let mut out = Output::create(args.out.as_deref())?;
    if out.is_file() {
        write_eval_csv(&mut out, label, l, &mode, &reals, &complexes, value, std_error)?;
    }
    let mut line = format!("rho[k1={k1},k2={k2},L={l},{mode},{label}] = {value:.16e}");
    if let Some(se) = std_error {
        line.push_str(&format!(" +- {se:.16e} (MC std error)"));
    }
    println!("{line}");
    if out.is_file() {
        status(&out, &format!("wrote {}", out.describe()));
    }
    out.finish()?;
    Ok(true)
}

/// One row; each point contributes a re/im column pair (reals first).
#[allow(clippy::too_many_arguments)]
fn write_eval_csv(
    out: &mut Output,
    method: &str,
    l: u32,
    mode: &str,
    reals: &[f64],
    complexes: &[Complex<f64>],
    value: f64,
    std_error: Option<f64>,
) -> Result<()> {
    let mut header = String::from("method,l,mode");
    for p in 1..=reals.len() + complexes.len() {
        header.push_str(&format!(",re_{p},im_{p}"));
    }
    header.push_str(",value,std_error");
    writeln!(out, "{header}")?;

    let mut row = format!("{method},{l},{mode}");
    for &x in reals {
        row.push_str(&format!(",{x:.16e},{:.16e}", 0.0));
    }
    for &z in complexes {
        row.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
    }
    row.push_str(&format!(",{value:.16e},"));
    if let Some(se) = std_error {
        row.push_str(&format!("{se:.16e}"));
    }
    writeln!(out, "{row}")?;
    Ok(())
}
