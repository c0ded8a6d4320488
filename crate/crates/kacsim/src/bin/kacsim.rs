//! Thin command-line front end over the experiment harness.
//!
//! Subcommands: `density`, `sample`, `compare`, `perfect`. Exit code 2 on
//! configuration validation failures, 1 on runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kacsim::algorithms::Algorithm;
use kacsim::analytic::DensityCurve;
use kacsim::error::Error;
use kacsim::harness::config::{parse_binning, ConfigFile};
use kacsim::harness::{self, output, ExperimentSpec};
use kacsim::metrics::Binning;

#[derive(Parser)]
#[command(name = "kacsim", version, about = "Collision-model velocity samplers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an analytic density curve on a grid and emit CSV.
    Density {
        /// Curve: initial, exact or limit.
        #[arg(long)]
        curve: String,
        /// Time for the exact curve ("inf" = stationary).
        #[arg(long)]
        t: Option<f64>,
        /// Grid as lo:hi:step.
        #[arg(long, default_value = "-5:5:0.1", allow_hyphen_values = true)]
        grid: String,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the particle-1 velocity at time t over seeded replicates.
    Sample(RunArgs),
    /// Average TVN over algorithm/N/dt sweeps into a long-format CSV.
    Compare(RunArgs),
    /// Draw from the stationary distribution via coupling from the past.
    Perfect(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm(s), comma-separated: nanbu, nanbu_babovsky, bird, poisson.
    #[arg(long, value_delimiter = ',')]
    algorithm: Vec<Algorithm>,
    /// Particle count(s), comma-separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Collision rate per particle.
    #[arg(long)]
    lambda: Option<f64>,
    /// Final time.
    #[arg(long)]
    t: Option<f64>,
    /// Time step(s) for nanbu/nanbu_babovsky, comma-separated.
    #[arg(long, value_delimiter = ',')]
    dt: Vec<f64>,
    /// Number of independent replicates.
    #[arg(long)]
    replicates: Option<usize>,
    /// Independent TVN estimates to average (compare only).
    #[arg(long)]
    tvn_repeats: Option<usize>,
    /// Base seed; replicate r uses stream id r.
    #[arg(long)]
    seed: Option<u64>,
    /// Histogram binning as lo:hi:width.
    #[arg(long, allow_hyphen_values = true)]
    bins: Option<String>,
    /// Coalescence tolerance (perfect only).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Sphere energy override (perfect only; default 1.5 * n).
    #[arg(long)]
    energy: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Config file with the same keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output base path; writes <out>.csv and <out>.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    /// defaults <- config file <- flags.
    fn resolve(&self) -> kacsim::Result<(ExperimentSpec, PathBuf)> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut spec = ExperimentSpec::default();
        spec.algorithms = if !self.algorithm.is_empty() {
            self.algorithm.clone()
        } else {
            file.algorithms.clone().unwrap_or(spec.algorithms)
        };
        spec.n_list = if !self.n.is_empty() {
            self.n.clone()
        } else {
            file.n_list.clone().unwrap_or(spec.n_list)
        };
        spec.lambda = self.lambda.or(file.lambda).unwrap_or(spec.lambda);
        spec.t_final = self.t.or(file.t_final).unwrap_or(spec.t_final);
        spec.dt_list = if !self.dt.is_empty() {
            self.dt.clone()
        } else {
            file.dt_list.clone().unwrap_or_default()
        };
        spec.replicates = self.replicates.or(file.replicates).unwrap_or(spec.replicates);
        spec.tvn_repeats = self
            .tvn_repeats
            .or(file.tvn_repeats)
            .unwrap_or(spec.tvn_repeats);
        spec.seed = self.seed.or(file.seed).unwrap_or(spec.seed);
        if let Some(bins) = &self.bins {
            spec.binning = parse_binning(bins).map_err(Error::InvalidConfig)?;
        } else if let Some(b) = file.binning {
            spec.binning = b;
        }
        spec.epsilon = self.epsilon.or(file.epsilon).unwrap_or(spec.epsilon);
        spec.energy = self.energy.or(file.energy);
        spec.workers = self.workers.or(file.workers);
        let out = self
            .out
            .clone()
            .or_else(|| file.out.map(PathBuf::from))
            .ok_or_else(|| Error::config("an output base path is required (--out or 'out =' in the config file)"))?;
        Ok((spec, out))
    }
}

fn parse_curve(name: &str, t: Option<f64>) -> kacsim::Result<DensityCurve> {
    match name {
        "initial" => Ok(DensityCurve::Initial),
        "limit" => Ok(DensityCurve::Limit),
        "exact" => {
            let t = t.ok_or_else(|| Error::config("the exact curve requires --t"))?;
            Ok(DensityCurve::Exact { t })
        }
        other => Err(Error::config(format!(
            "unknown curve '{other}' (expected initial, exact or limit)"
        ))),
    }
}

fn parse_grid(s: &str) -> kacsim::Result<(f64, f64, f64)> {
    let b: Binning = parse_binning(s).map_err(Error::InvalidConfig)?;
    Ok((b.lo, b.hi, b.width))
}

fn run(cli: Cli) -> kacsim::Result<()> {
    match cli.command {
        Command::Density { curve, t, grid, out } => {
            let curve = parse_curve(&curve, t)?;
            // A density grid need not tile exactly; reuse the lo:hi:step
            // syntax but only require lo < hi and step > 0.
            let (lo, hi, step) = match parse_grid(&grid) {
                Ok(g) => g,
                Err(_) => {
                    let parts: Vec<&str> = grid.split(':').collect();
                    if parts.len() != 3 {
                        return Err(Error::config(format!("bad grid '{grid}'")));
                    }
                    let parse = |p: &str| {
                        p.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::config(format!("bad grid '{grid}': {e}")))
                    };
                    (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)
                }
            };
            let rows = harness::density_rows(&curve, lo, hi, step)?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path)?;
                    output::write_density_csv(std::io::BufWriter::new(file), &rows)?;
                }
                None => output::write_density_csv(std::io::stdout().lock(), &rows)?,
            }
        }
        Command::Sample(args) => {
            let (spec, out) = args.resolve()?;
            let result = harness::run_sample(&spec)?;
            output::save_sample(&out, &result)?;
            match result.summary.tvn {
                Some(tvn) => eprintln!(
                    "sample: {} replicates, tvn = {tvn:.4} -> {}.csv/.json",
                    spec.replicates,
                    out.display()
                ),
                None => eprintln!(
                    "sample: {} replicates (no oracle at lambda = {}) -> {}.csv/.json",
                    spec.replicates,
                    spec.lambda,
                    out.display()
                ),
            }
        }
        Command::Compare(args) => {
            let (spec, out) = args.resolve()?;
            let result = harness::run_compare(&spec)?;
            output::save_compare(&out, &result)?;
            eprintln!(
                "compare: {} cells x {} repeats -> {}.csv/.json",
                result.rows.len(),
                spec.tvn_repeats,
                out.display()
            );
        }
        Command::Perfect(args) => {
            let (spec, out) = args.resolve()?;
            let result = harness::run_perfect(&spec)?;
            output::save_perfect(&out, &result)?;
            let s = &result.summary;
            eprintln!(
                "perfect: {} draws, tvn = {:.4}, coupling mean/min/max = {:.1}/{}/{} -> {}.csv/.json",
                spec.replicates,
                s.tvn_vs_limit,
                s.coupling_time_mean,
                s.coupling_time_min,
                s.coupling_time_max,
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::InvalidConfig(_) | Error::InvalidParam(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
