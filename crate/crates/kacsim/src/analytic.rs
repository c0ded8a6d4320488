//! Closed-form velocity densities and exact samplers.
//!
//! The single-particle velocity density of the collision model admits a
//! closed-form time-dependent solution (Krook-Wu / BKW form) when the initial
//! density is `f0(v) = (2/sqrt(pi)) v^2 exp(-v^2)` and the collision rate is
//! `lambda = sqrt(pi)/2`:
//!
//! ```text
//! f(v,t) = (1/sqrt(pi)) [ (3/2)(1-C) sqrt(C) + (3C-1) C^(3/2) v^2 ] exp(-C v^2)
//! C(t)   = 1 / (3 - 2 exp(-sqrt(pi) t / 16))
//! ```
//!
//! As t goes to infinity, C -> 1/3 and f converges to a centered Gaussian
//! with variance 3/2. These curves are the validation oracle for every
//! sampler in the crate. `t = f64::INFINITY` is the distinguished input for
//! the limit; the exponential evaluates to exactly zero there, so no large
//! finite time is ever needed.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// The collision rate under which the closed-form solution holds.
pub const BKW_LAMBDA: f64 = 0.886_226_925_452_758; // sqrt(pi)/2

use std::f64::consts::FRAC_2_SQRT_PI; // 2/sqrt(pi)

/// One of the three analytic curves, evaluated pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityCurve {
    /// Initial density `(2/sqrt(pi)) v^2 exp(-v^2)`.
    Initial,
    /// Time-t solution; `t = f64::INFINITY` selects the limit form.
    Exact { t: f64 },
    /// Stationary Gaussian with mean 0 and variance 3/2.
    Limit,
}

impl DensityCurve {
    /// Pointwise evaluation. Inputs are assumed finite; the checked entry
    /// points below validate.
    pub fn eval(&self, v: f64) -> f64 {
        match *self {
            DensityCurve::Initial => f0(v),
            DensityCurve::Exact { t } => bkw(v, c_unchecked(t)),
            DensityCurve::Limit => limit(v),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            DensityCurve::Initial => "initial".to_string(),
            DensityCurve::Exact { t } if t.is_infinite() => "exact(t=inf)".to_string(),
            DensityCurve::Exact { t } => format!("exact(t={t})"),
            DensityCurve::Limit => "limit".to_string(),
        }
    }
}

fn f0(v: f64) -> f64 {
    FRAC_2_SQRT_PI * v * v * (-v * v).exp()
}

fn limit(v: f64) -> f64 {
    (3.0 * std::f64::consts::PI).sqrt().recip() * (-v * v / 3.0).exp()
}

fn c_unchecked(t: f64) -> f64 {
    // exp(-inf) = 0 exactly, so t = +inf lands on C = 1/3 with no overflow.
    1.0 / (3.0 - 2.0 * (-std::f64::consts::PI.sqrt() * t / 16.0).exp())
}

fn bkw(v: f64, c: f64) -> f64 {
    let sqrt_c = c.sqrt();
    let bracket = 1.5 * (1.0 - c) * sqrt_c + (3.0 * c - 1.0) * c * sqrt_c * v * v;
    std::f64::consts::PI.sqrt().recip() * bracket * (-c * v * v).exp()
}

fn check_v(v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("velocity must be finite, got {v}")))
    }
}

fn check_t(t: f64) -> Result<()> {
    // +inf is the distinguished "stationary" input.
    if t.is_nan() || t < 0.0 {
        Err(Error::param(format!("time must be >= 0 or +inf, got {t}")))
    } else {
        Ok(())
    }
}

/// Initial density `f0(v) = (2/sqrt(pi)) v^2 exp(-v^2)`.
pub fn initial_density(v: f64) -> Result<f64> {
    check_v(v)?;
    Ok(f0(v))
}

/// Interpolation coefficient `C(t) = [3 - 2 exp(-sqrt(pi) t/16)]^-1 in [1/3, 1]`.
pub fn c_of_t(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(c_unchecked(t))
}

/// Time-t solution; requires the model to run at `lambda = sqrt(pi)/2`.
pub fn exact_density(v: f64, t: f64) -> Result<f64> {
    check_v(v)?;
    check_t(t)?;
    Ok(bkw(v, c_unchecked(t)))
}

/// Stationary density `(1/sqrt(3 pi)) exp(-v^2/3)`: Gaussian, variance 3/2.
pub fn limit_density(v: f64) -> Result<f64> {
    check_v(v)?;
    Ok(limit(v))
}

/// Exact draw from the initial density.
///
/// |V|^2 is Gamma(3/2, 1), assembled rejection-free as Exp(1) + N(0,1)^2/2;
/// a symmetric random sign completes the draw. Change of variables gives
/// |V| the density (4/sqrt(pi)) v^2 exp(-v^2) on (0, inf), i.e. the folded f0.
pub fn sample_initial(s: &mut RngStream) -> f64 {
    let g = s.exponential() + 0.5 * s.standard_normal().powi(2);
    let magnitude = g.sqrt();
    if s.u01() < 0.5 {
        -magnitude
    } else {
        magnitude
    }
}
