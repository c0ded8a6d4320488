//! Epsilon-perfect sampling of the stationary velocity distribution.
//!
//! The stationary law of the collision walk is uniform on the energy sphere,
//! and by symmetry it is enough to walk on the first octant and attach
//! independent random signs at the end. Restricted to the octant, a collision
//! update of pair (p1, p2) with angle theta in [0, pi/2) reads
//!
//! ```text
//! e      = c(p1)^2 + c(p2)^2
//! c(p1)' = sqrt(e) sin(theta)
//! c(p2)' = sqrt(e - c(p1)'^2)
//! ```
//!
//! which is a deterministic contraction of the whole octant for each fixed
//! (theta, pair): applying it to the N corner points `sqrt(E) e_i` encloses
//! the image of every state. Coupling from the past then runs a stored
//! update sequence from times -T..-1 with T doubled until the corner images
//! at time 0 sit within Euclidean diameter epsilon of each other; the mean
//! corner with random signs is the epsilon-perfect draw. Stored randomness is
//! never regenerated between attempts — that reuse is what makes the scheme
//! correct rather than merely convergent.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Sub-stream tag for the output sign flips, kept separate so coupling-time
/// statistics do not depend on whether signs are consumed.
const SIGN_STREAM_TAG: u64 = 1;

/// Hard cap on the backward horizon; coupling is a.s. finite long before
/// this, so hitting it means a bug or a degenerate configuration.
const MAX_BACKWARD_STEPS: u64 = 1 << 30;

/// One stored update: an angle in [0, pi/2) and an ordered pair of distinct
/// indices. Order matters: the first index receives the sine coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateRecord {
    pub theta: f64,
    pub pair: (usize, usize),
}

impl UpdateRecord {
    fn sample(n: usize, s: &mut RngStream) -> Self {
        let theta = s
            .uniform(0.0, std::f64::consts::FRAC_PI_2)
            .expect("constant bounds are valid");
        let pair = s.random_pair(n, true).expect("n >= 2 checked at entry");
        Self { theta, pair }
    }
}

/// The N tracked corner points on the first-octant energy sphere, stored as
/// a flat row-major N x N matrix (row i = corner i).
#[derive(Debug, Clone, PartialEq)]
pub struct CornerState {
    n: usize,
    energy: f64,
    coords: Vec<f64>,
}

impl CornerState {
    /// Fresh corners `sqrt(E) e_i`.
    pub fn fresh(n: usize, energy: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("need n >= 2 corner points, got {n}")));
        }
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::param(format!(
                "energy must be finite and > 0, got {energy}"
            )));
        }
        let mut coords = vec![0.0; n * n];
        let r = energy.sqrt();
        for i in 0..n {
            coords[i * n + i] = r;
        }
        Ok(Self { n, energy, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn corner(&self, i: usize) -> &[f64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    /// Apply one stored update to every corner. Only the two paired
    /// coordinates change; pair energy is preserved per corner and all
    /// coordinates stay nonnegative because sin and the square root do.
    pub fn apply_update(&mut self, u: &UpdateRecord) {
        let (p1, p2) = u.pair;
        debug_assert!(p1 != p2 && p1 < self.n && p2 < self.n);
        let sin = u.theta.sin();
        for i in 0..self.n {
            let row = i * self.n;
            let a = self.coords[row + p1];
            let b = self.coords[row + p2];
            let e = a * a + b * b;
            let new_a = e.sqrt() * sin;
            // Guard the tiny negative residue floating rounding can leave.
            let new_b = (e - new_a * new_a).max(0.0).sqrt();
            self.coords[row + p1] = new_a;
            self.coords[row + p2] = new_b;
        }
    }

    /// Maximum Euclidean distance between any two corner points.
    pub fn max_pairwise_distance(&self) -> f64 {
        let mut max_sq = 0.0f64;
        for i in 0..self.n {
            let ci = self.corner(i);
            for j in (i + 1)..self.n {
                let cj = self.corner(j);
                let d_sq: f64 = ci.iter().zip(cj).map(|(a, b)| (a - b) * (a - b)).sum();
                max_sq = max_sq.max(d_sq);
            }
        }
        max_sq.sqrt()
    }

    /// Coordinate-wise mean of the N corners.
    pub fn mean_corner(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.n];
        for i in 0..self.n {
            for (m, &c) in mean.iter_mut().zip(self.corner(i)) {
                *m += c;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        mean
    }
}

/// Append-only randomness history addressed by negative time: `records[k]`
/// is the update at time -(k+1). Extending never touches existing entries.
#[derive(Debug, Clone)]
pub struct UpdateHistory {
    n: usize,
    records: Vec<UpdateRecord>,
    stream: RngStream,
}

impl UpdateHistory {
    pub fn new(n: usize, stream: RngStream) -> Self {
        Self {
            n,
            records: Vec::new(),
            stream,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[UpdateRecord] {
        &self.records
    }

    /// Ensure records exist back to time -t.
    pub fn extend_to(&mut self, t: u64) {
        while (self.records.len() as u64) < t {
            self.records.push(UpdateRecord::sample(self.n, &mut self.stream));
        }
    }

    /// Replay from time -t to -1 onto fresh corners.
    pub fn replay(&self, t: u64, energy: f64) -> Result<CornerState> {
        let mut state = CornerState::fresh(self.n, energy)?;
        for k in (0..t as usize).rev() {
            state.apply_update(&self.records[k]);
        }
        Ok(state)
    }
}

/// A coalesced stationary draw.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectDraw {
    /// Mean corner with independent random signs attached per coordinate.
    pub velocity_vector: Vec<f64>,
    /// Backward horizon T at which the corners were epsilon-coalesced.
    pub coupling_time: u64,
    /// Corner diameter at time 0 (strictly below epsilon).
    pub final_diameter: f64,
}

/// Coordinate-1 velocity of a draw; the coordinate the samplers report.
pub fn coordinate_sample(d: &PerfectDraw) -> f64 {
    d.velocity_vector[0]
}

/// Run coupling from the past until the corner diameter at time 0 falls
/// below `epsilon`, doubling the backward horizon between attempts (T = 1,
/// 2, 4, ...) and reusing stored randomness bit-exactly.
pub fn cftp_sample(
    n: usize,
    energy: f64,
    epsilon: f64,
    s: &mut RngStream,
) -> Result<PerfectDraw> {
    if n < 2 {
        return Err(Error::param(format!("cftp needs n >= 2, got {n}")));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::param(format!(
            "epsilon must be finite and > 0, got {epsilon}"
        )));
    }
    // Signs come from a dedicated substream so the coupling search consumes
    // an identical draw sequence whether or not the output is used.
    let mut sign_stream = s.substream(SIGN_STREAM_TAG);
    let mut history = UpdateHistory::new(n, s.clone());

    let mut t = 1u64;
    loop {
        history.extend_to(t);
        let state = history.replay(t, energy)?;
        let diameter = state.max_pairwise_distance();
        if diameter < epsilon {
            let mut velocity_vector = state.mean_corner();
            for v in &mut velocity_vector {
                if sign_stream.u01() < 0.5 {
                    *v = -*v;
                }
            }
            return Ok(PerfectDraw {
                velocity_vector,
                coupling_time: t,
                final_diameter: diameter,
            });
        }
        if t >= MAX_BACKWARD_STEPS {
            return Err(Error::CouplingOverflow {
                max_steps: MAX_BACKWARD_STEPS,
                epsilon,
            });
        }
        t *= 2;
    }
}
