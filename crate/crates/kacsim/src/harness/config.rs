//! Flat key-value experiment files.
//!
//! One `key = value` pair per line, `#` starts a comment, lists are
//! comma-separated. Keys mirror the CLI flags; flags given on the command
//! line override file values. Example:
//!
//! ```text
//! # Bird DSMC at N = 50
//! algorithm  = bird
//! n          = 50
//! t          = 2
//! replicates = 100000
//! seed       = 1
//! bins       = -5:5:0.1
//! ```

use std::path::Path;

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::metrics::Binning;

/// Raw values read from a config file; `None` means "not set here".
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub algorithms: Option<Vec<Algorithm>>,
    pub n_list: Option<Vec<usize>>,
    pub lambda: Option<f64>,
    pub t_final: Option<f64>,
    pub dt_list: Option<Vec<f64>>,
    pub replicates: Option<usize>,
    pub tvn_repeats: Option<usize>,
    pub seed: Option<u64>,
    pub binning: Option<Binning>,
    pub epsilon: Option<f64>,
    pub energy: Option<f64>,
    pub workers: Option<usize>,
    pub out: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| {
            Error::config(format!("{}: {}", path.display(), e))
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut cfg = ConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let err = |e: String| format!("line {}: {}", lineno + 1, e);
            match key {
                "algorithm" | "algorithms" => {
                    let list = value
                        .split(',')
                        .map(|s| s.trim().parse::<Algorithm>().map_err(|e| e.to_string()))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(err)?;
                    cfg.algorithms = Some(list);
                }
                "n" => cfg.n_list = Some(parse_list(value).map_err(err)?),
                "lambda" => cfg.lambda = Some(parse_one(value).map_err(err)?),
                "t" => cfg.t_final = Some(parse_one(value).map_err(err)?),
                "dt" => cfg.dt_list = Some(parse_list(value).map_err(err)?),
                "replicates" => cfg.replicates = Some(parse_one(value).map_err(err)?),
                "tvn_repeats" => cfg.tvn_repeats = Some(parse_one(value).map_err(err)?),
                "seed" => cfg.seed = Some(parse_one(value).map_err(err)?),
                "bins" => cfg.binning = Some(parse_binning(value).map_err(err)?),
                "epsilon" => cfg.epsilon = Some(parse_one(value).map_err(err)?),
                "energy" => cfg.energy = Some(parse_one(value).map_err(err)?),
                "workers" => cfg.workers = Some(parse_one(value).map_err(err)?),
                "out" => cfg.out = Some(value.to_string()),
                other => return Err(format!("line {}: unknown key '{}'", lineno + 1, other)),
            }
        }
        Ok(cfg)
    }
}

fn parse_one<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("cannot parse '{s}': {e}"))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(|item| parse_one(item.trim())).collect()
}

/// `lo:hi:width`, e.g. `-5:5:0.1`.
pub fn parse_binning(s: &str) -> std::result::Result<Binning, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bins must be lo:hi:width, got '{s}'"));
    }
    let lo = parse_one(parts[0].trim())?;
    let hi = parse_one(parts[1].trim())?;
    let width = parse_one(parts[2].trim())?;
    let binning = Binning { lo, hi, width };
    binning.n_bins().map_err(|e| e.to_string())?;
    Ok(binning)
}
