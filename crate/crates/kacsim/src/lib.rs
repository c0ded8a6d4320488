//! Monte Carlo samplers for the velocity distribution of a one-dimensional
//! N-particle collision model.
//!
//! The model evolves N velocities through random pair rotations clocked by a
//! Poisson process; the single-particle velocity density then solves a
//! Boltzmann-type kinetic equation whose closed-form (Krook-Wu) solution
//! serves as the validation oracle. This crate provides:
//!
//! * [`analytic`] — the initial, time-t and stationary densities plus an
//!   exact initial-condition sampler;
//! * [`collision`] — the pair-rotation primitive and ensemble state;
//! * [`algorithms`] — four finite-time samplers of the particle-1 marginal
//!   (Nanbu, Nanbu-Babovsky, Bird DSMC, exact Poisson);
//! * [`perfect`] — an epsilon-perfect coupling-from-the-past sampler of the
//!   stationary distribution;
//! * [`metrics`] — histogram binning and the discrete total-variation-norm
//!   estimate used to score every sampler against the oracle;
//! * [`harness`] — seeded replicate orchestration with CSV/JSON artifacts,
//!   also exposed through the `kacsim` command-line binary;
//! * [`rng`] — deterministic splittable random streams (one per replicate).
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `cargo run --example density_curves`.

pub mod algorithms;
pub mod analytic;
pub mod collision;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod perfect;
pub mod quad;
pub mod rng;

pub use error::{Error, Result};
