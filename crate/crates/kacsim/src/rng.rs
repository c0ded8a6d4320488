//! Deterministic, splittable random streams.
//!
//! Every random draw in the crate flows through an [`RngStream`]. A stream is
//! identified by `(seed, stream_id)`: the same pair always replays the same
//! sequence bit-for-bit, and distinct stream ids on one seed give
//! statistically independent sequences (ChaCha streams differ in their nonce,
//! so independence holds by construction rather than by jump-ahead tricks).
//!
//! Stream assignment policy: replicate `r` of an experiment uses
//! `stream_id = r`. Internal substreams (e.g. the sign stream of the perfect
//! sampler) live in the upper half of the id space, carved out by
//! [`RngStream::substream`], so they never collide with replicate ids.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

const TWO_POW_NEG53: f64 = 1.0 / (1u64 << 53) as f64;

/// Seedable deterministic random source with independent substreams.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derive an independent stream for an internal purpose (`tag >= 1`).
    ///
    /// Substream ids have the top bit set; replicate ids are plain integers,
    /// so the two spaces cannot collide for any realistic replicate count.
    pub fn substream(&self, tag: u64) -> Self {
        let id = (1u64 << 63) | (self.stream_id ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        Self::new(self.seed, id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn u01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG53
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::param(format!(
                "uniform bounds must be finite with lo < hi, got [{lo}, {hi})"
            )));
        }
        loop {
            let v = lo + (hi - lo) * self.u01();
            // Rounding at the top of a wide interval can land exactly on hi;
            // redraw to keep the half-open contract.
            if v < hi {
                return Ok(v);
            }
        }
    }

    /// True with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!(
                "bernoulli p must lie in [0, 1], got {p}"
            )));
        }
        // u01() < 1 always, so p = 1 is always true and p = 0 always false.
        Ok(self.u01() < p)
    }

    /// Exactly uniform integer in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n >= 1);
        let n = n as u64;
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Standard normal via Box-Muller.
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.u01().max(TWO_POW_NEG53); // guard ln(0)
        let u2 = self.u01();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Exponential with rate 1.
    pub fn exponential(&mut self) -> f64 {
        -(1.0 - self.u01()).ln()
    }

    /// Poisson-distributed count with the given mean.
    ///
    /// Sequential-search inversion below mean 10; Hormann's transformed
    /// rejection (PTRS) above, so sub-ensemble counts with means in the
    /// thousands stay O(1) per draw.
    pub fn poisson(&mut self, mean: f64) -> Result<u64> {
        if !mean.is_finite() || mean < 0.0 {
            return Err(Error::param(format!(
                "poisson mean must be finite and >= 0, got {mean}"
            )));
        }
        if mean == 0.0 {
            return Ok(0);
        }
        if mean < 10.0 {
            Ok(self.poisson_inversion(mean))
        } else {
            Ok(self.poisson_ptrs(mean))
        }
    }

    fn poisson_inversion(&mut self, mean: f64) -> u64 {
        let mut p = (-mean).exp();
        let mut cdf = p;
        let mut k = 0u64;
        let u = self.u01();
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
        }
        k
    }

    // Transformed rejection with squeeze (Hormann 1993), valid for mean >= 10.
    fn poisson_ptrs(&mut self, mean: f64) -> u64 {
        let b = 0.931 + 2.53 * mean.sqrt();
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let v_r = 0.9277 - 3.6224 / (b - 2.0);
        let ln_mean = mean.ln();
        loop {
            let u = self.u01() - 0.5;
            let v = self.u01();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
            if us >= 0.07 && v <= v_r {
                return k as u64;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let lhs = (v * inv_alpha / (a / (us * us) + b)).ln();
            if lhs <= k * ln_mean - mean - ln_factorial(k as u64) {
                return k as u64;
            }
        }
    }

    /// Uniformly random pair of distinct indices in [0, n).
    ///
    /// With `ordered` each of the n(n-1) ordered pairs has equal probability;
    /// otherwise the pair is returned with `i < j` and each of the C(n,2)
    /// unordered pairs has equal probability.
    pub fn random_pair(&mut self, n: usize, ordered: bool) -> Result<(usize, usize)> {
        if n < 2 {
            return Err(Error::param(format!("random_pair needs n >= 2, got {n}")));
        }
        let i = self.index(n);
        let mut j = self.index(n - 1);
        if j >= i {
            j += 1;
        }
        if ordered || i < j {
            Ok((i, j))
        } else {
            Ok((j, i))
        }
    }

    /// `m` disjoint pairs of indices drawn from [0, n), uniform over all ways
    /// of choosing a sequence of m disjoint pairs.
    ///
    /// Partial Fisher-Yates over the index pool: the first 2m slots are
    /// shuffled, then read off two at a time. O(n) per call, exactly uniform.
    pub fn random_disjoint_pairs(&mut self, n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
        if 2 * m > n {
            return Err(Error::param(format!(
                "random_disjoint_pairs needs 2m <= n, got n = {n}, m = {m}"
            )));
        }
        if m == 0 {
            return Ok(Vec::new());
        }
        let mut pool: Vec<usize> = (0..n).collect();
        for k in 0..2 * m {
            let pick = k + self.index(n - k);
            pool.swap(k, pick);
        }
        Ok((0..m).map(|p| (pool[2 * p], pool[2 * p + 1])).collect())
    }
}

/// ln(k!) — exact table for small k, Stirling series beyond it.
fn ln_factorial(k: u64) -> f64 {
    const TABLE: [f64; 10] = [
        0.0,
        0.0,
        std::f64::consts::LN_2,
        1.791_759_469_228_055,
        3.178_053_830_347_946,
        4.787_491_742_782_046,
        6.579_251_212_010_101,
        8.525_161_361_065_415,
        10.604_602_902_745_25,
        12.801_827_480_081_469,
    ];
    if k < 10 {
        return TABLE[k as usize];
    }
    let x = (k + 1) as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_bit_exact() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 0);
        let first = a.uniform(0.0, 1.0).unwrap();
        assert_eq!(first.to_bits(), b.uniform(0.0, 1.0).unwrap().to_bits());
        // Mixed draw kinds replay too.
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
            assert_eq!(a.poisson(3.7).unwrap(), b.poisson(3.7).unwrap());
            assert_eq!(
                a.random_pair(17, true).unwrap(),
                b.random_pair(17, true).unwrap()
            );
        }
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(7, 0);
        let mut b = RngStream::new(7, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn substream_is_independent_and_stable() {
        let s = RngStream::new(7, 3);
        let mut sub1 = s.substream(1);
        let mut sub2 = s.substream(1);
        assert_eq!(sub1.next_u64(), sub2.next_u64());
        assert_ne!(s.clone().next_u64(), s.substream(1).next_u64());
    }

    #[test]
    fn uniform_range_contract() {
        let mut s = RngStream::new(1, 0);
        let two_pi = 2.0 * std::f64::consts::PI;
        for _ in 0..10_000 {
            let v = s.uniform(0.0, two_pi).unwrap();
            assert!((0.0..two_pi).contains(&v));
        }
    }

    #[test]
    fn uniform_rejects_bad_bounds() {
        let mut s = RngStream::new(1, 0);
        assert!(s.uniform(1.0, 1.0).is_err());
        assert!(s.uniform(2.0, 1.0).is_err());
        assert!(s.uniform(0.0, f64::INFINITY).is_err());
        assert!(s.uniform(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn uniform_mean_on_unit_interval() {
        let mut s = RngStream::new(2024, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.u01()).sum::<f64>() / n as f64;
        assert!(
            (mean - 0.5).abs() < 0.002,
            "uniform mean {mean} deviates from 0.5"
        );
    }

    #[test]
    fn poisson_degenerate_and_validation() {
        let mut s = RngStream::new(3, 0);
        for _ in 0..100 {
            assert_eq!(s.poisson(0.0).unwrap(), 0);
        }
        assert!(s.poisson(-1.0).is_err());
        assert!(s.poisson(f64::NAN).is_err());
        assert!(s.poisson(f64::INFINITY).is_err());
    }

    #[test]
    fn poisson_mean_at_sqrt_pi() {
        // mean = sqrt(pi): particle-1 collision count for lambda = sqrt(pi)/2, t = 2
        let target = std::f64::consts::PI.sqrt();
        let mut s = RngStream::new(5, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.poisson(target).unwrap() as f64).sum::<f64>() / n as f64;
        assert!(
            (mean - 1.772_453_850_905_516).abs() < 0.01,
            "poisson mean {mean} deviates from sqrt(pi)"
        );
    }

    #[test]
    fn poisson_variance_matches_mean() {
        let mut s = RngStream::new(6, 0);
        let n = 1_000_000usize;
        let draws: Vec<f64> = (0..n).map(|_| s.poisson(4.0).unwrap() as f64).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(
            (var - 4.0).abs() < 0.05,
            "poisson variance {var} deviates from 4"
        );
    }

    #[test]
    fn poisson_large_mean_moments() {
        // Exercises the PTRS branch.
        let mut s = RngStream::new(7, 0);
        let n = 1_000_000usize;
        let lam = 50.0;
        let draws: Vec<f64> = (0..n).map(|_| s.poisson(lam).unwrap() as f64).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // 5 sigma bounds: sd(mean) = sqrt(lam/n), sd(var) ~ sqrt((2 lam^2 + lam)/n)
        assert!((mean - lam).abs() < 5.0 * (lam / n as f64).sqrt());
        assert!((var - lam).abs() < 5.0 * ((2.0 * lam * lam + lam) / n as f64).sqrt());
    }

    #[test]
    fn bernoulli_endpoints_and_frequency() {
        let mut s = RngStream::new(8, 0);
        for _ in 0..1000 {
            assert!(!s.bernoulli(0.0).unwrap());
            assert!(s.bernoulli(1.0).unwrap());
        }
        assert!(s.bernoulli(-0.1).is_err());
        assert!(s.bernoulli(1.1).is_err());
        let n = 1_000_000;
        let hits = (0..n).filter(|_| s.bernoulli(0.3).unwrap()).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.3).abs() < 0.002, "bernoulli frequency {freq}");
    }

    #[test]
    fn random_pair_n2_unordered() {
        let mut s = RngStream::new(9, 0);
        for _ in 0..100 {
            assert_eq!(s.random_pair(2, false).unwrap(), (0, 1));
        }
        assert!(s.random_pair(1, false).is_err());
    }

    #[test]
    fn random_pair_unordered_uniformity() {
        let mut s = RngStream::new(10, 0);
        let n = 1_000_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..n {
            let p = s.random_pair(5, false).unwrap();
            *counts.entry(p).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 10);
        for (&pair, &c) in &counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 0.1).abs() < 0.005, "pair {pair:?} frequency {freq}");
        }
    }

    #[test]
    fn random_pair_ordered_uniformity() {
        let mut s = RngStream::new(11, 0);
        let n = 600_000;
        let mut fwd = 0usize;
        let mut rev = 0usize;
        for _ in 0..n {
            match s.random_pair(3, true).unwrap() {
                (1, 0) => rev += 1,
                (0, 1) => fwd += 1,
                _ => {}
            }
        }
        let sixth = 1.0 / 6.0;
        assert!((fwd as f64 / n as f64 - sixth).abs() < 0.005);
        assert!((rev as f64 / n as f64 - sixth).abs() < 0.005);
    }

    #[test]
    fn disjoint_pairs_edge_cases() {
        let mut s = RngStream::new(12, 0);
        assert!(s.random_disjoint_pairs(3, 2).is_err());
        assert!(s.random_disjoint_pairs(4, 0).unwrap().is_empty());
        let pairs = s.random_disjoint_pairs(100, 50).unwrap();
        let mut seen = [false; 100];
        for (i, j) in pairs {
            assert!(!seen[i] && !seen[j]);
            seen[i] = true;
            seen[j] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn disjoint_pairs_matching_uniformity() {
        // n = 4, m = 2: three perfect matchings of {0,1,2,3}.
        let mut s = RngStream::new(13, 0);
        let n = 100_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let pairs = s.random_disjoint_pairs(4, 2).unwrap();
            let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
            let mut m: Vec<_> = pairs.iter().map(|&(a, b)| key(a, b)).collect();
            m.sort_unstable();
            let idx = match (m[0], m[1]) {
                ((0, 1), (2, 3)) => 0,
                ((0, 2), (1, 3)) => 1,
                ((0, 3), (1, 2)) => 2,
                other => panic!("not a perfect matching: {other:?}"),
            };
            counts[idx] += 1;
        }
        for &c in &counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.01, "matching frequency {freq}");
        }
    }

    #[test]
    fn ln_factorial_against_direct_product() {
        for k in 0..30u64 {
            let direct: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
            assert!((ln_factorial(k) - direct).abs() < 1e-10, "ln {k}! mismatch");
        }
    }

    proptest::proptest! {
        #[test]
        fn disjoint_pairs_never_repeat_an_index(seed in 0u64..1000, n in 2usize..40, frac in 0.0f64..=1.0) {
            let m = ((n / 2) as f64 * frac) as usize;
            let mut s = RngStream::new(seed, 0);
            let pairs = s.random_disjoint_pairs(n, m).unwrap();
            let mut idx: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            idx.sort_unstable();
            let before = idx.len();
            idx.dedup();
            proptest::prop_assert_eq!(before, idx.len());
            proptest::prop_assert_eq!(before, 2 * m);
        }

        #[test]
        fn uniform_stays_in_bounds(seed in 0u64..1000, lo in -100.0f64..100.0, width in 1e-6f64..100.0) {
            let mut s = RngStream::new(seed, 0);
            let hi = lo + width;
            let v = s.uniform(lo, hi).unwrap();
            proptest::prop_assert!(v >= lo && v < hi);
        }
    }
}
