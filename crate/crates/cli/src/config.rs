//! Config-file handling and the small value parsers shared by the flags.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use num_complex::Complex;

/// A real-axis binning parsed from `lo:hi:bins`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

/// Parses `lo:hi:bins`, e.g. `-0.9:0.9:12`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, bins] = parts.as_slice() else {
        return Err(format!("expected lo:hi:bins (e.g. -0.9:0.9:12), got '{s}'"));
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("'{lo}' is not a number in grid '{s}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("'{hi}' is not a number in grid '{s}'"))?;
    let bins: usize = bins
        .trim()
        .parse()
        .map_err(|_| format!("'{bins}' is not a bin count in grid '{s}'"))?;
    if !(lo < hi) {
        return Err(format!("grid '{s}' needs lo < hi"));
    }
    if bins == 0 {
        return Err(format!("grid '{s}' needs at least one bin"));
    }
    Ok(GridSpec { lo, hi, bins })
}

/// Parses a complex literal of the form `a+bi` / `a-bi` (exponents
/// allowed, e.g. `1.5e-2+3e-1i`).
pub fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let bad = |why: &str| format!("'{s}' is not a complex literal a+bi ({why})");
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Err(bad("it must end in i, e.g. 0.0+0.3i"));
    };
    let bytes = body.as_bytes();
    // The split sign is the last +/- that is not a leading sign and not
    // part of an exponent.
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let Some(split) = split else {
        return Err(bad("no sign separates the real and imaginary parts"));
    };
    let re: f64 = body[..split]
        .parse()
        .map_err(|_| bad("the real part is not a number"))?;
    let im_str = &body[split..];
    let im: f64 = match im_str {
        "+" => 1.0,
        "-" => -1.0,
        _ => im_str
            .parse()
            .map_err(|_| bad("the imaginary part is not a number"))?,
    };
    Ok(Complex::new(re, im))
}

/// Key=value defaults loaded from `--config`. Keys are case-insensitive;
/// `#` starts a comment. Flags always override these values.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
    source: String,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{} line {}: expected key=value, got '{line}'",
                    path.display(),
                    lineno + 1
                );
            };
            values.insert(key.trim().to_lowercase(), value.trim().to_string());
        }
        Ok(FileConfig {
            values,
            source: path.display().to_string(),
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&key.to_lowercase()).map(String::as_str)
    }

    /// The config value under `key`, parsed, or `None` when absent.
    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some(raw) = self.raw(key) else {
            return Ok(None);
        };
        match raw.parse() {
            Ok(v) => Ok(Some(v)),
            Err(e) => bail!("config {} key '{key}': {e} (value '{raw}')", self.source),
        }
    }

    /// A comma-separated list under `key`, parsed element-wise with `f`.
    pub fn parsed_list<T>(
        &self,
        key: &str,
        f: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<Vec<T>>> {
        let Some(raw) = self.raw(key) else {
            return Ok(None);
        };
        raw.split(',')
            .map(|item| {
                f(item.trim())
                    .map_err(|e| anyhow::anyhow!("config {} key '{key}': {e}", self.source))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_round_trip() {
        assert_eq!(parse_complex("0.0+0.3i").unwrap(), Complex::new(0.0, 0.3));
        assert_eq!(parse_complex("-0.5-0.25i").unwrap(), Complex::new(-0.5, -0.25));
        assert_eq!(
            parse_complex("1.5e-2+3e-1i").unwrap(),
            Complex::new(0.015, 0.3)
        );
        assert_eq!(parse_complex("0.2+i").unwrap(), Complex::new(0.2, 1.0));
        assert!(parse_complex("0.5").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("0.5i").is_err());
    }

    #[test]
    fn grids_parse_and_validate() {
        assert_eq!(
            parse_grid("-0.9:0.9:12").unwrap(),
            GridSpec {
                lo: -0.9,
                hi: 0.9,
                bins: 12
            }
        );
        assert!(parse_grid("1:0:4").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn config_files_supply_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "seed = 7 # master seed\nSAMPLES=3\n\ndraws=1000\n").unwrap();
        let cfg = FileConfig::load(Some(&path)).unwrap();
        assert_eq!(cfg.parsed::<u64>("seed").unwrap(), Some(7));
        assert_eq!(cfg.parsed::<usize>("samples").unwrap(), Some(3));
        assert_eq!(cfg.parsed::<u64>("draws").unwrap(), Some(1000));
        assert_eq!(cfg.parsed::<u64>("missing").unwrap(), None);
        assert!(cfg.parsed::<u64>("seed").is_ok());

        std::fs::write(&path, "just a line\n").unwrap();
        assert!(FileConfig::load(Some(&path)).is_err());
    }
}
