//! Experiment orchestration: fan replicates over a worker pool, reduce into
//! histograms, compute oracle TVNs, and assemble reproducible summaries.
//!
//! Replicate r of a run always uses `RngStream::new(seed, r)` (repeat j of a
//! TVN-repeat sweep shifts the block: `j * replicates + r`), independent of
//! worker scheduling, so parallel and serial execution produce identical
//! artifacts.

pub mod config;
pub mod output;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{self, Algorithm, SimConfig};
use crate::analytic::{self, DensityCurve};
use crate::error::{Error, Result};
use crate::metrics::{self, Binning, Histogram, CANONICAL_BINNING};
use crate::perfect;
use crate::rng::RngStream;

/// Everything a run needs, resolved from defaults, config file and flags.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub algorithms: Vec<Algorithm>,
    pub n_list: Vec<usize>,
    pub lambda: f64,
    pub t_final: f64,
    pub dt_list: Vec<f64>,
    pub replicates: usize,
    /// Independent TVN estimates to average in `compare`.
    pub tvn_repeats: usize,
    pub seed: u64,
    pub binning: Binning,
    /// Coalescence tolerance for `perfect`.
    pub epsilon: f64,
    /// Sphere energy override for `perfect`; default is (3/2) N.
    pub energy: Option<f64>,
    pub workers: Option<usize>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Bird],
            n_list: vec![50],
            lambda: analytic::BKW_LAMBDA,
            t_final: 2.0,
            dt_list: Vec::new(),
            replicates: 100_000,
            tvn_repeats: 1,
            seed: 1,
            binning: CANONICAL_BINNING,
            epsilon: 1e-6,
            energy: None,
            workers: None,
        }
    }
}

impl ExperimentSpec {
    /// True when the configured rate matches the rate under which the
    /// closed-form solution holds, so oracle TVNs are meaningful.
    pub fn oracle_available(&self) -> bool {
        (self.lambda - analytic::BKW_LAMBDA).abs() <= 1e-12
    }

    /// Resolved sphere energy for perfect runs.
    pub fn perfect_energy(&self) -> f64 {
        self.energy.unwrap_or(1.5 * self.n_list[0] as f64)
    }

    fn single_config(&self) -> Result<SimConfig> {
        if self.algorithms.len() != 1 {
            return Err(Error::config(format!(
                "sample takes exactly one algorithm, got {}",
                self.algorithms.len()
            )));
        }
        if self.n_list.len() != 1 {
            return Err(Error::config(format!(
                "sample takes exactly one n, got {:?}",
                self.n_list
            )));
        }
        if self.dt_list.len() > 1 {
            return Err(Error::config(format!(
                "sample takes at most one dt, got {:?}",
                self.dt_list
            )));
        }
        let cfg = SimConfig {
            algorithm: self.algorithms[0],
            n_particles: self.n_list[0],
            lambda: self.lambda,
            t_final: self.t_final,
            dt: self.dt_list.first().copied(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn check_replicates(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::config("replicates must be >= 1".to_string()));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            if w == 0 {
                return Err(Error::config("workers must be >= 1".to_string()));
            }
            builder = builder.num_threads(w);
        }
        builder
            .build()
            .map_err(|e| Error::config(format!("cannot build worker pool: {e}")))
    }
}

/// Rows of (v, density) on an inclusive grid.
pub fn density_rows(curve: &DensityCurve, lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !lo.is_finite() || !hi.is_finite() || !step.is_finite() || step <= 0.0 || lo >= hi {
        return Err(Error::config(format!(
            "bad grid: need finite lo < hi and step > 0, got {lo}:{hi}:{step}"
        )));
    }
    if let DensityCurve::Exact { t } = curve {
        analytic::c_of_t(*t)?; // surfaces negative/NaN t as an error
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| {
            let v = lo + k as f64 * step;
            (v, curve.eval(v))
        })
        .collect())
}

/// Summary emitted next to every sample histogram.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub command: &'static str,
    pub version: &'static str,
    pub spec: ExperimentSpec,
    pub n_samples: u64,
    /// TVN of the v1 histogram against the time-t oracle; absent when the
    /// run's lambda is not the oracle rate.
    pub tvn: Option<f64>,
    pub collisions_processed_mean: f64,
    pub collisions_saved_mean: f64,
    /// Per-bin relative error against the oracle, where defined.
    pub bin_rel_error_max: Option<f64>,
    pub bin_rel_error_mean: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SampleOutput {
    pub histogram: Histogram,
    /// Oracle bin probabilities on the same binning, when available.
    pub target_probs: Option<Vec<f64>>,
    pub summary: SampleSummary,
}

/// Run `replicates` independent simulations, one particle-1 draw each.
pub fn run_sample(spec: &ExperimentSpec) -> Result<SampleOutput> {
    let cfg = spec.single_config()?;
    spec.check_replicates()?;
    let seed = spec.seed;
    let pool = spec.pool()?;
    let results: Vec<(f64, u64, f64)> = pool.install(|| {
        (0..spec.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let mut s = RngStream::new(seed, r);
                let run = algorithms::run(&cfg, &mut s).expect("config validated above");
                (run.v1, run.collisions_processed, run.collisions_saved)
            })
            .collect()
    });

    let mut histogram = Histogram::new(spec.binning)?;
    let mut processed = 0.0;
    let mut saved = 0.0;
    for &(v1, c, s) in &results {
        histogram.add(v1);
        processed += c as f64;
        saved += s;
    }
    let nf = results.len() as f64;

    let target_probs = spec
        .oracle_available()
        .then(|| metrics::density_bin_probs(&histogram, |v| DensityCurve::Exact { t: cfg.t_final }.eval(v)));
    let tvn = match &target_probs {
        Some(q) => Some(metrics::tvn_discrete(&histogram.empirical_probs()?, q)?),
        None => None,
    };
    let (rel_max, rel_mean) = match &target_probs {
        Some(q) => {
            let p = histogram.empirical_probs()?;
            let errs: Vec<f64> = p
                .iter()
                .zip(q)
                .filter(|(_, &t)| t > 0.0)
                .map(|(&e, &t)| (e - t).abs() / t)
                .collect();
            let max = errs.iter().copied().fold(0.0, f64::max);
            let mean = errs.iter().sum::<f64>() / errs.len() as f64;
            (Some(max), Some(mean))
        }
        None => (None, None),
    };

    Ok(SampleOutput {
        summary: SampleSummary {
            command: "sample",
            version: env!("CARGO_PKG_VERSION"),
            spec: spec.clone(),
            n_samples: histogram.total(),
            tvn,
            collisions_processed_mean: processed / nf,
            collisions_saved_mean: saved / nf,
            bin_rel_error_max: rel_max,
            bin_rel_error_mean: rel_mean,
        },
        histogram,
        target_probs,
    })
}

/// One cell of the compare sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub dt: Option<f64>,
    pub mean_tvn: f64,
    pub sd_tvn: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub command: &'static str,
    pub version: &'static str,
    pub spec: ExperimentSpec,
    pub rows: usize,
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub rows: Vec<CompareRow>,
    pub summary: CompareSummary,
}

/// Average `tvn_repeats` independent TVN estimates for every
/// (algorithm, n, dt-where-applicable) cell.
pub fn run_compare(spec: &ExperimentSpec) -> Result<CompareOutput> {
    if !spec.oracle_available() {
        return Err(Error::config(format!(
            "compare needs the oracle rate lambda = sqrt(pi)/2 = {}, got {}",
            analytic::BKW_LAMBDA,
            spec.lambda
        )));
    }
    spec.check_replicates()?;
    if spec.tvn_repeats == 0 {
        return Err(Error::config("tvn_repeats must be >= 1".to_string()));
    }
    if spec.algorithms.is_empty() || spec.n_list.is_empty() {
        return Err(Error::config(
            "compare needs at least one algorithm and one n".to_string(),
        ));
    }

    let mut cells = Vec::new();
    for &algorithm in &spec.algorithms {
        let dts: Vec<Option<f64>> = if algorithm.uses_dt() {
            if spec.dt_list.is_empty() {
                return Err(Error::config(format!(
                    "{} requires dt in a compare sweep",
                    algorithm.name()
                )));
            }
            spec.dt_list.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for &n in &spec.n_list {
            for &dt in &dts {
                let cfg = SimConfig {
                    algorithm,
                    n_particles: n,
                    lambda: spec.lambda,
                    t_final: spec.t_final,
                    dt,
                };
                cfg.validate()?;
                cells.push(cfg);
            }
        }
    }

    let pool = spec.pool()?;
    let mut rows = Vec::with_capacity(cells.len());
    for cfg in cells {
        let mut tvns = Vec::with_capacity(spec.tvn_repeats);
        for repeat in 0..spec.tvn_repeats as u64 {
            let base = repeat * spec.replicates as u64;
            let v1s: Vec<f64> = pool.install(|| {
                (0..spec.replicates as u64)
                    .into_par_iter()
                    .map(|r| {
                        let mut s = RngStream::new(spec.seed, base + r);
                        algorithms::run(&cfg, &mut s)
                            .expect("config validated above")
                            .v1
                    })
                    .collect()
            });
            let mut h = Histogram::new(spec.binning)?;
            h.add_all(&v1s);
            tvns.push(metrics::tvn_vs_density(&h, |v| {
                DensityCurve::Exact { t: cfg.t_final }.eval(v)
            })?);
        }
        let mean = tvns.iter().sum::<f64>() / tvns.len() as f64;
        let sd = if tvns.len() > 1 {
            (tvns.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (tvns.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        rows.push(CompareRow {
            algorithm: cfg.algorithm,
            n: cfg.n_particles,
            dt: cfg.dt,
            mean_tvn: mean,
            sd_tvn: sd,
        });
    }

    Ok(CompareOutput {
        summary: CompareSummary {
            command: "compare",
            version: env!("CARGO_PKG_VERSION"),
            spec: spec.clone(),
            rows: rows.len(),
        },
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PerfectSummary {
    pub command: &'static str,
    pub version: &'static str,
    pub spec: ExperimentSpec,
    pub energy: f64,
    pub n_samples: u64,
    /// TVN of the coordinate histogram against the stationary density.
    pub tvn_vs_limit: f64,
    pub coordinate_variance: f64,
    pub coupling_time_mean: f64,
    pub coupling_time_min: u64,
    pub coupling_time_max: u64,
    /// Set when epsilon exceeds the fresh-corner diameter sqrt(2E): the
    /// sampler coalesces trivially and the histogram degenerates near the
    /// corner averages.
    pub degenerate_epsilon: bool,
}

#[derive(Debug, Clone)]
pub struct PerfectOutput {
    pub histogram: Histogram,
    pub target_probs: Vec<f64>,
    /// Per-draw (v1, coupling_time) rows, in replicate order.
    pub draws: Vec<(f64, u64)>,
    pub summary: PerfectSummary,
}

/// Run `replicates` independent coupling-from-the-past draws.
pub fn run_perfect(spec: &ExperimentSpec) -> Result<PerfectOutput> {
    spec.check_replicates()?;
    if spec.n_list.len() != 1 {
        return Err(Error::config(format!(
            "perfect takes exactly one n, got {:?}",
            spec.n_list
        )));
    }
    let n = spec.n_list[0];
    let energy = spec.perfect_energy();
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::config(format!(
            "energy must be finite and > 0, got {energy}"
        )));
    }
    if !(spec.epsilon.is_finite() && spec.epsilon > 0.0) {
        return Err(Error::config(format!(
            "epsilon must be finite and > 0, got {}",
            spec.epsilon
        )));
    }
    if n < 2 {
        return Err(Error::config(format!("perfect needs n >= 2, got {n}")));
    }

    let pool = spec.pool()?;
    let draws: Vec<(f64, u64)> = pool.install(|| {
        (0..spec.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let mut s = RngStream::new(spec.seed, r);
                let d = perfect::cftp_sample(n, energy, spec.epsilon, &mut s)
                    .expect("parameters validated above");
                (perfect::coordinate_sample(&d), d.coupling_time)
            })
            .collect()
    });

    let mut histogram = Histogram::new(spec.binning)?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut t_sum = 0.0;
    let mut t_min = u64::MAX;
    let mut t_max = 0u64;
    for &(v1, t) in &draws {
        histogram.add(v1);
        sum += v1;
        sum_sq += v1 * v1;
        t_sum += t as f64;
        t_min = t_min.min(t);
        t_max = t_max.max(t);
    }
    let nf = draws.len() as f64;
    let mean = sum / nf;
    let variance = if draws.len() > 1 {
        (sum_sq - nf * mean * mean) / (nf - 1.0)
    } else {
        0.0
    };

    let target_probs = metrics::density_bin_probs(&histogram, |v| DensityCurve::Limit.eval(v));
    let tvn = metrics::tvn_discrete(&histogram.empirical_probs()?, &target_probs)?;

    Ok(PerfectOutput {
        summary: PerfectSummary {
            command: "perfect",
            version: env!("CARGO_PKG_VERSION"),
            spec: spec.clone(),
            energy,
            n_samples: histogram.total(),
            tvn_vs_limit: tvn,
            coordinate_variance: variance,
            coupling_time_mean: t_sum / nf,
            coupling_time_min: t_min,
            coupling_time_max: t_max,
            degenerate_epsilon: spec.epsilon >= (2.0 * energy).sqrt(),
        },
        histogram,
        target_probs,
        draws,
    })
}
