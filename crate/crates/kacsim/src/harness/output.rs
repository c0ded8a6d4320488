//! CSV and JSON artifact writers.
//!
//! Formats are pinned:
//! * histogram CSV: `bin_lo,bin_hi,count,empirical_prob,target_prob`
//!   (target cells empty when no oracle applies);
//! * density CSV: `v,density`;
//! * compare CSV: `algorithm,n,dt,mean_tvn,sd_tvn` (dt empty where unused);
//! * per-draw CSV (perfect): `v1,coupling_time`.
//!
//! Floats are written with Rust's shortest round-trip formatting, so the
//! same run produces byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::metrics::Histogram;

use super::{CompareOutput, PerfectOutput, SampleOutput};

pub fn write_density_csv<W: Write>(mut w: W, rows: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "v,density")?;
    for (v, d) in rows {
        writeln!(w, "{v},{d}")?;
    }
    Ok(())
}

pub fn write_histogram_csv<W: Write>(
    mut w: W,
    h: &Histogram,
    target_probs: Option<&[f64]>,
) -> Result<()> {
    writeln!(w, "bin_lo,bin_hi,count,empirical_prob,target_prob")?;
    let probs = if h.in_range() > 0 {
        h.empirical_probs()?
    } else {
        vec![0.0; h.counts().len()]
    };
    for (b, (&count, &p)) in h.counts().iter().zip(&probs).enumerate() {
        let (lo, hi) = h.bin_edges(b);
        match target_probs {
            Some(q) => writeln!(w, "{lo},{hi},{count},{p},{}", q[b])?,
            None => writeln!(w, "{lo},{hi},{count},{p},")?,
        }
    }
    Ok(())
}

pub fn write_compare_csv<W: Write>(mut w: W, out: &CompareOutput) -> Result<()> {
    writeln!(w, "algorithm,n,dt,mean_tvn,sd_tvn")?;
    for row in &out.rows {
        let dt = row.dt.map(|d| d.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            row.algorithm.name(),
            row.n,
            dt,
            row.mean_tvn,
            row.sd_tvn
        )?;
    }
    Ok(())
}

pub fn write_draws_csv<W: Write>(mut w: W, draws: &[(f64, u64)]) -> Result<()> {
    writeln!(w, "v1,coupling_time")?;
    for (v1, t) in draws {
        writeln!(w, "{v1},{t}")?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, summary: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)?;
    writeln!(w, "{text}")?;
    Ok(())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(std::io::BufWriter::new(std::fs::File::create(path)?))
}

fn with_suffix(base: &Path, suffix: &str) -> std::path::PathBuf {
    let mut name = base.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    base.with_file_name(name)
}

/// `<base>.csv` + `<base>.json`.
pub fn save_sample(base: &Path, out: &SampleOutput) -> Result<()> {
    write_histogram_csv(
        create(&with_suffix(base, ".csv"))?,
        &out.histogram,
        out.target_probs.as_deref(),
    )?;
    write_json(create(&with_suffix(base, ".json"))?, &out.summary)
}

/// `<base>.csv` + `<base>.json`.
pub fn save_compare(base: &Path, out: &CompareOutput) -> Result<()> {
    write_compare_csv(create(&with_suffix(base, ".csv"))?, out)?;
    write_json(create(&with_suffix(base, ".json"))?, &out.summary)
}

/// `<base>.csv` (histogram) + `<base>_draws.csv` + `<base>.json`.
pub fn save_perfect(base: &Path, out: &PerfectOutput) -> Result<()> {
    write_histogram_csv(
        create(&with_suffix(base, ".csv"))?,
        &out.histogram,
        Some(&out.target_probs),
    )?;
    write_draws_csv(create(&with_suffix(base, "_draws.csv"))?, &out.draws)?;
    write_json(create(&with_suffix(base, ".json"))?, &out.summary)
}
