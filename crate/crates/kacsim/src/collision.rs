//! The two-particle rotation primitive and the ensemble it acts on.
//!
//! A collision rotates one velocity pair by a scattering angle:
//!
//! ```text
//! (vi, vj) -> (vi cos t + vj sin t, -vi sin t + vj cos t)
//! ```
//!
//! which preserves vi^2 + vj^2 exactly (up to rounding), hence the total
//! kinetic energy `E = sum v_i^2`. Energy is never renormalized during a run;
//! drift is asserted in tests so that an algorithmic bug cannot hide behind a
//! rescaling step.

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Scattering angle in radians, restricted to [0, 2*pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(f64);

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..TWO_PI).contains(&theta) {
            return Err(Error::param(format!(
                "angle must lie in [0, 2*pi), got {theta}"
            )));
        }
        Ok(Angle(theta))
    }

    /// Uniform angle, the isotropic scattering law used throughout.
    pub fn sample(s: &mut RngStream) -> Self {
        Angle(s.uniform(0.0, TWO_PI).expect("constant bounds are valid"))
    }

    pub fn radians(&self) -> f64 {
        self.0
    }

    /// The inverse rotation angle, again in [0, 2*pi).
    pub fn inverse(&self) -> Self {
        if self.0 == 0.0 {
            Angle(0.0)
        } else {
            Angle(TWO_PI - self.0)
        }
    }
}

/// Rotate the pre-collision pair. Both outputs are computed from the inputs
/// simultaneously; callers must not alias through the ensemble mid-update.
#[inline]
pub fn collide(vi: f64, vj: f64, theta: Angle) -> (f64, f64) {
    let (sin, cos) = theta.0.sin_cos();
    (vi * cos + vj * sin, -vi * sin + vj * cos)
}

/// N particle velocities with their conserved kinetic energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    velocities: Vec<f64>,
}

impl Ensemble {
    pub fn new(velocities: Vec<f64>) -> Result<Self> {
        if velocities.len() < 2 {
            return Err(Error::param(format!(
                "an ensemble needs at least 2 particles, got {}",
                velocities.len()
            )));
        }
        Ok(Self { velocities })
    }

    /// N iid draws from the initial density.
    pub fn sample_initial(n: usize, s: &mut RngStream) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!(
                "an ensemble needs at least 2 particles, got {n}"
            )));
        }
        Ok(Self {
            velocities: (0..n).map(|_| crate::analytic::sample_initial(s)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees N >= 2
    }

    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    pub fn velocities_mut(&mut self) -> &mut [f64] {
        &mut self.velocities
    }

    pub fn into_velocities(self) -> Vec<f64> {
        self.velocities
    }

    /// Total kinetic energy `E = sum v_i^2` (particle mass fixed at 2).
    pub fn total_energy(&self) -> f64 {
        self.velocities.iter().map(|v| v * v).sum()
    }

    /// Rotate the particles at `i` and `j` by `theta`.
    pub fn apply_collision(&mut self, i: usize, j: usize, theta: Angle) {
        debug_assert!(i != j);
        let (vi, vj) = collide(self.velocities[i], self.velocities[j], theta);
        self.velocities[i] = vi;
        self.velocities[j] = vj;
    }
}

/// One step of the discrete-time walk: a uniformly random unordered pair is
/// rotated by a uniform angle; every other coordinate is untouched.
pub fn kac_walk_step(e: &mut Ensemble, s: &mut RngStream) {
    let (i, j) = s
        .random_pair(e.len(), false)
        .expect("ensemble has at least 2 particles");
    let theta = Angle::sample(s);
    e.apply_collision(i, j, theta);
}
