//! Histograms and the discrete total-variation-norm estimate.
//!
//! Empirical samples and analytic densities are compared on a common
//! fixed-width binning:
//!
//! ```text
//! TVN(p, q) = (1/2) sum_b |p_b - q_b|
//! ```
//!
//! The estimate depends on the binning, so one canonical geometry
//! ([`CANONICAL_BINNING`]: 100 bins of width 0.1 on [-5, 5]) is pinned for
//! every oracle comparison and recorded in all outputs. Density bin masses
//! come from 5-point Gauss-Legendre per bin; out-of-range sample mass is
//! excluded and the density renormalized over the range so both vectors live
//! on the same discrete space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre_5;

/// Binning geometry: `(hi - lo) / width` must be integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Binning {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

/// The geometry used for all comparisons against the analytic curves.
pub const CANONICAL_BINNING: Binning = Binning {
    lo: -5.0,
    hi: 5.0,
    width: 0.1,
};

impl Binning {
    pub fn n_bins(&self) -> Result<usize> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo >= self.hi {
            return Err(Error::Histogram(format!(
                "bin range must be finite with lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::Histogram(format!(
                "bin width must be finite and > 0, got {}",
                self.width
            )));
        }
        let ratio = (self.hi - self.lo) / self.width;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(Error::Histogram(format!(
                "(hi - lo)/width must be an integer, got {ratio}"
            )));
        }
        Ok(ratio.round() as usize)
    }
}

/// Fixed-width binned counts with separate under/overflow tallies.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    binning: Binning,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
}

impl Histogram {
    pub fn new(binning: Binning) -> Result<Self> {
        let n = binning.n_bins()?;
        Ok(Self {
            binning,
            counts: vec![0; n],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn binning(&self) -> Binning {
        self.binning
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn underflow(&self) -> u64 {
        self.underflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    /// All samples seen, in range or not.
    pub fn total(&self) -> u64 {
        self.in_range() + self.underflow + self.overflow
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Left-closed binning: bin b covers [lo + b*width, lo + (b+1)*width).
    pub fn add(&mut self, x: f64) {
        let b = ((x - self.binning.lo) / self.binning.width).floor();
        if x < self.binning.lo || b < 0.0 {
            self.underflow += 1;
        } else if b as usize >= self.counts.len() {
            self.overflow += 1;
        } else {
            self.counts[b as usize] += 1;
        }
    }

    pub fn add_all(&mut self, samples: &[f64]) {
        for &x in samples {
            self.add(x);
        }
    }

    /// Empirical probabilities over in-range mass only.
    pub fn empirical_probs(&self) -> Result<Vec<f64>> {
        let total = self.in_range();
        if total == 0 {
            return Err(Error::Histogram("empty histogram".to_string()));
        }
        Ok(self
            .counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect())
    }

    pub fn bin_edges(&self, b: usize) -> (f64, f64) {
        let lo = self.binning.lo + b as f64 * self.binning.width;
        (lo, lo + self.binning.width)
    }
}

/// Build a histogram over [lo, hi) with the stated width.
pub fn build_histogram(samples: &[f64], lo: f64, hi: f64, width: f64) -> Result<Histogram> {
    let mut h = Histogram::new(Binning { lo, hi, width })?;
    h.add_all(samples);
    Ok(h)
}

/// Bin-wise sum of two histograms on identical geometry.
pub fn merge(a: &Histogram, b: &Histogram) -> Result<Histogram> {
    if a.binning != b.binning {
        return Err(Error::Histogram(format!(
            "cannot merge histograms with different geometry: {:?} vs {:?}",
            a.binning, b.binning
        )));
    }
    let mut out = a.clone();
    for (c, &d) in out.counts.iter_mut().zip(&b.counts) {
        *c += d;
    }
    out.underflow += b.underflow;
    out.overflow += b.overflow;
    Ok(out)
}

/// `(1/2) sum |p_b - q_b|` for two probability vectors on the same support.
pub fn tvn_discrete(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Histogram(format!(
            "probability vectors differ in length: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    for (name, v) in [("first", p), ("second", q)] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Histogram(format!(
                "{name} vector sums to {sum}, expected 1"
            )));
        }
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Per-bin probabilities of a density over the histogram's range, integrated
/// bin-by-bin and renormalized so the in-range mass is 1.
pub fn density_bin_probs(h: &Histogram, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut masses: Vec<f64> = (0..h.counts.len())
        .map(|b| {
            let (lo, hi) = h.bin_edges(b);
            gauss_legendre_5(&|v| f(v), lo, hi)
        })
        .collect();
    let total: f64 = masses.iter().sum();
    for m in &mut masses {
        *m /= total;
    }
    masses
}

/// TVN between a histogram's empirical distribution and a density.
pub fn tvn_vs_density(h: &Histogram, f: impl Fn(f64) -> f64) -> Result<f64> {
    let p = h.empirical_probs()?;
    let q = density_bin_probs(h, f);
    tvn_discrete(&p, &q)
}
