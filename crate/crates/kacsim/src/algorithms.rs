//! The four finite-time samplers of the particle-1 velocity marginal.
//!
//! All four start from N iid draws of the initial density and propagate the
//! ensemble to time t under isotropic pair collisions at rate lambda per
//! particle:
//!
//! * `nanbu` — per time step, each particle independently collides with
//!   probability lambda*dt against a partner read from the step-start
//!   snapshot; only the particle's own velocity is written, so kinetic energy
//!   is not conserved.
//! * `nanbu_babovsky` — per time step, Round[lambda*N*dt/2] disjoint pairs
//!   are rotated; both members are written, so energy is conserved exactly.
//! * `bird` — collisions are processed one at a time (pairs drawn with
//!   replacement) with the clock advanced by the mean inter-collision time
//!   2/(lambda*N); no dt parameter.
//! * `poisson` — the particle-1 collision process is a thinned Poisson
//!   process of rate lambda; the actual Poisson collision counts are used
//!   between particle-1 collision times, and nothing is propagated after the
//!   last one. No dt and no expected-count approximation.

use serde::{Deserialize, Serialize};

use crate::collision::{collide, Angle, Ensemble};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Nanbu,
    NanbuBabovsky,
    Bird,
    Poisson,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Nanbu => "nanbu",
            Algorithm::NanbuBabovsky => "nanbu_babovsky",
            Algorithm::Bird => "bird",
            Algorithm::Poisson => "poisson",
        }
    }

    /// Whether the algorithm consumes the `dt` parameter.
    pub fn uses_dt(&self) -> bool {
        matches!(self, Algorithm::Nanbu | Algorithm::NanbuBabovsky)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nanbu" => Ok(Algorithm::Nanbu),
            "nanbu_babovsky" | "nanbu-babovsky" => Ok(Algorithm::NanbuBabovsky),
            "bird" => Ok(Algorithm::Bird),
            "poisson" => Ok(Algorithm::Poisson),
            other => Err(Error::config(format!(
                "unknown algorithm '{other}' (expected nanbu, nanbu_babovsky, bird or poisson)"
            ))),
        }
    }
}

/// A validated single-run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    pub n_particles: usize,
    pub lambda: f64,
    pub t_final: f64,
    /// Time step; consulted by nanbu and nanbu_babovsky only.
    pub dt: Option<f64>,
}

impl SimConfig {
    /// Check every rule the selected algorithm imposes. Each violation is
    /// reported with the rule spelled out.
    pub fn validate(&self) -> Result<()> {
        if self.n_particles < 2 {
            return Err(Error::config(format!(
                "n_particles must be >= 2, got {}",
                self.n_particles
            )));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::config(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        if !self.t_final.is_finite() || self.t_final < 0.0 {
            return Err(Error::config(format!(
                "t_final must be finite and >= 0, got {}",
                self.t_final
            )));
        }
        if self.algorithm.uses_dt() {
            let dt = self.dt.ok_or_else(|| {
                Error::config(format!("{} requires dt", self.algorithm.name()))
            })?;
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::config(format!("dt must be finite and > 0, got {dt}")));
            }
            let lam_dt = self.lambda * dt;
            if lam_dt > 1.0 {
                return Err(Error::config(format!(
                    "rule lambda*dt <= 1 violated: lambda*dt = {lam_dt}"
                )));
            }
            let steps = self.t_final / dt;
            if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                return Err(Error::config(format!(
                    "dt must divide t_final evenly: t/dt = {steps}"
                )));
            }
            if self.algorithm == Algorithm::NanbuBabovsky {
                // Round[...] <= floor(x) + 1 <= x + 1, so this guarantees the
                // pair count always fits disjointly into N particles.
                let n = self.n_particles as f64;
                if self.lambda * n * dt / 2.0 + 1.0 > n / 2.0 {
                    return Err(Error::config(format!(
                        "rule lambda*N*dt/2 + 1 <= N/2 violated: lhs = {}",
                        self.lambda * n * dt / 2.0 + 1.0
                    )));
                }
            }
        }
        Ok(())
    }

    fn n_steps(&self) -> usize {
        match self.dt {
            Some(dt) => (self.t_final / dt).round() as usize,
            None => 0,
        }
    }
}

/// Final state and telemetry of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_velocities: Ensemble,
    /// Velocity of particle 1 (coordinate 0) at t_final.
    pub v1: f64,
    /// Pair rotations processed (particle-update events for nanbu).
    pub collisions_processed: u64,
    /// Expected number of collisions skipped by not propagating past the
    /// last particle-1 collision. Zero for every algorithm except poisson.
    pub collisions_saved: f64,
}

impl RunResult {
    fn new(e: Ensemble, collisions_processed: u64, collisions_saved: f64) -> Self {
        let v1 = e.velocities()[0];
        Self {
            final_velocities: e,
            v1,
            collisions_processed,
            collisions_saved,
        }
    }
}

/// Randomized integer rounding with expectation x: floor(x) with probability
/// floor(x)+1-x, else floor(x)+1.
pub fn round_probabilistic(x: f64, s: &mut RngStream) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::param(format!(
            "round_probabilistic needs finite x >= 0, got {x}"
        )));
    }
    let floor = x.floor();
    let frac = x - floor;
    Ok(floor as u64 + u64::from(s.bernoulli(frac)?))
}

/// Dispatch on `cfg.algorithm`.
pub fn run(cfg: &SimConfig, s: &mut RngStream) -> Result<RunResult> {
    match cfg.algorithm {
        Algorithm::Nanbu => run_nanbu(cfg, s),
        Algorithm::NanbuBabovsky => run_nanbu_babovsky(cfg, s),
        Algorithm::Bird => run_bird_dsmc(cfg, s),
        Algorithm::Poisson => run_exact_poisson(cfg, s),
    }
}

/// Per step, every particle independently collides with probability
/// lambda*dt; both operands of the update are read from the step-start
/// snapshot and only the particle's own entry is written.
pub fn run_nanbu(cfg: &SimConfig, s: &mut RngStream) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.n_particles;
    let p_collide = cfg.lambda * cfg.dt.unwrap_or(0.0);
    let mut e = Ensemble::sample_initial(n, s)?;
    let mut snapshot = vec![0.0; n];
    let mut collisions = 0u64;
    for _ in 0..cfg.n_steps() {
        snapshot.copy_from_slice(e.velocities());
        let v = e.velocities_mut();
        for i in 0..n {
            if s.bernoulli(p_collide)? {
                let mut j = s.index(n - 1);
                if j >= i {
                    j += 1;
                }
                let theta = Angle::sample(s);
                let (vi, _) = collide(snapshot[i], snapshot[j], theta);
                v[i] = vi;
                collisions += 1;
            }
        }
    }
    Ok(RunResult::new(e, collisions, 0.0))
}

/// Per step, Round[lambda*N*dt/2] disjoint pairs are rotated with fresh
/// angles; unselected particles are untouched. Energy-conserving.
pub fn run_nanbu_babovsky(cfg: &SimConfig, s: &mut RngStream) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.n_particles;
    let expected_pairs = cfg.lambda * n as f64 * cfg.dt.unwrap_or(0.0) / 2.0;
    let mut e = Ensemble::sample_initial(n, s)?;
    let mut collisions = 0u64;
    for _ in 0..cfg.n_steps() {
        let m = round_probabilistic(expected_pairs, s)? as usize;
        if m > n / 2 {
            return Err(Error::config(format!(
                "rounded pair count {m} exceeds N/2 = {}",
                n / 2
            )));
        }
        for (i, j) in s.random_disjoint_pairs(n, m)? {
            let theta = Angle::sample(s);
            e.apply_collision(i, j, theta);
            collisions += 1;
        }
    }
    Ok(RunResult::new(e, collisions, 0.0))
}

/// Collisions are processed one pair at a time with the clock advanced by
/// the mean inter-collision time 2/(lambda*N); a collision is processed only
/// if the post-increment clock stays within t_final.
pub fn run_bird_dsmc(cfg: &SimConfig, s: &mut RngStream) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.n_particles;
    let mut e = Ensemble::sample_initial(n, s)?;
    let mut collisions = 0u64;
    if cfg.lambda > 0.0 {
        let dt_c = 2.0 / (cfg.lambda * n as f64);
        // k * dt_c (not an accumulating sum) keeps the stop rule free of
        // rounding drift and makes the collision count deterministic.
        let mut k = 1u64;
        while k as f64 * dt_c <= cfg.t_final {
            let (i, j) = s.random_pair(n, false)?;
            let theta = Angle::sample(s);
            e.apply_collision(i, j, theta);
            collisions += 1;
            k += 1;
        }
    }
    Ok(RunResult::new(e, collisions, 0.0))
}

/// Exact sampler of the particle-1 marginal at t_final.
///
/// K ~ Poisson(lambda*t) particle-1 collision times are placed uniformly in
/// (0, t) and sorted; between consecutive times the (N-1)-particle background
/// processes its own Poisson number of collisions, then particle 1 collides
/// with a uniformly chosen partner. The window after the last particle-1
/// collision is never simulated; `collisions_saved` records the ensemble-rate
/// expectation lambda*N*(t - T_K)/2 of what was skipped.
pub fn run_exact_poisson(cfg: &SimConfig, s: &mut RngStream) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.n_particles;
    let lambda = cfg.lambda;
    let t = cfg.t_final;
    let mut e = Ensemble::sample_initial(n, s)?;
    let mut collisions = 0u64;

    let k = s.poisson(lambda * t)?;
    let mut times: Vec<f64> = Vec::with_capacity(k as usize);
    for _ in 0..k {
        times.push(if t > 0.0 { s.uniform(0.0, t)? } else { 0.0 });
    }
    // Conditional uniformity: given K, the collision times are iid uniform;
    // sorting yields the ordered times. Ties have probability zero and keep
    // draw order under the stable sort.
    times.sort_by(|a, b| a.partial_cmp(b).expect("uniform draws are finite"));

    let mut t_prev = 0.0;
    for &t_i in &times {
        // Background collisions among particles {2..N} during (t_prev, t_i].
        // With N = 2 the sub-ensemble has one particle and no pairs; the
        // thinned particle-1 process is unaffected.
        if n > 2 {
            let mean = lambda * (n - 1) as f64 * (t_i - t_prev) / 2.0;
            let k_i = s.poisson(mean)?;
            for _ in 0..k_i {
                let (r, q) = s.random_pair(n - 1, false)?;
                let theta = Angle::sample(s);
                e.apply_collision(r + 1, q + 1, theta);
                collisions += 1;
            }
        }
        // Particle 1 collides with a uniformly chosen partner; the rotation
        // writes both coordinates, preserving the pair energy.
        let partner = 1 + s.index(n - 1);
        let theta = Angle::sample(s);
        e.apply_collision(0, partner, theta);
        collisions += 1;
        t_prev = t_i;
    }

    let saved = lambda * n as f64 * (t - t_prev) / 2.0;
    Ok(RunResult::new(e, collisions, saved))
}

/// Expected collision savings of the poisson algorithm per replicate:
/// (N/2)(1 - exp(-lambda t)).
pub fn expected_savings(n: usize, lambda: f64, t: f64) -> f64 {
    n as f64 / 2.0 * (1.0 - (-lambda * t).exp())
}
