//! Acceptance suite: one test per release criterion, each printing a
//! `criterion NN <name>: PASS` line (visible with `--nocapture`).
//!
//! Run with `cargo test --test acceptance`. By default the two expensive
//! criteria (04, 08) run their documented reduced profiles; set
//! `KACSIM_ACCEPTANCE_FULL=1` to run everything at full scale (tens of
//! minutes), which also enables the large-N cross-algorithm agreement check.

use kacsim::algorithms::{self, Algorithm, SimConfig};
use kacsim::analytic::{self, BKW_LAMBDA};
use kacsim::collision::{collide, Angle, Ensemble};
use kacsim::harness::{self, ExperimentSpec};
use kacsim::metrics::{build_histogram, tvn_discrete, tvn_vs_density, Histogram, CANONICAL_BINNING};
use kacsim::perfect::{self, CornerState, UpdateHistory, UpdateRecord};
use kacsim::quad::adaptive_simpson;
use kacsim::rng::RngStream;

fn full_profile() -> bool {
    std::env::var("KACSIM_ACCEPTANCE_FULL").as_deref() == Ok("1")
}

fn spec(algorithm: Algorithm, n: usize, dt: Option<f64>, replicates: usize, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        algorithms: vec![algorithm],
        n_list: vec![n],
        dt_list: dt.into_iter().collect(),
        replicates,
        seed,
        ..ExperimentSpec::default()
    }
}

/// Two-sample Kolmogorov-Smirnov statistic, computed directly from the
/// sorted samples (independent of the crate's histogram machinery).
fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

#[test]
fn criterion_01_oracle_self_consistency() {
    let start = std::time::Instant::now();
    for k in 0..=200 {
        let v = -5.0 + k as f64 * 0.05;
        let a = analytic::exact_density(v, 0.0).unwrap();
        let b = analytic::initial_density(v).unwrap();
        assert!((a - b).abs() <= 1e-12, "t=0 mismatch {} at v={v}", a - b);
    }
    for t in [0.0, 0.5, 1.0, 2.0, 5.0, f64::INFINITY] {
        let f = |v: f64| analytic::exact_density(v, t).unwrap();
        let mass = adaptive_simpson(&f, -8.0, 8.0, 1e-12);
        assert!((mass - 1.0).abs() <= 1e-8, "mass {mass} at t={t}");
        let second = adaptive_simpson(&|v| v * v * f(v), -10.0, 10.0, 1e-10);
        assert!((second - 1.5).abs() <= 1e-6, "second moment {second} at t={t}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "oracle checks took {elapsed:?}");
    println!("criterion 01 oracle-self-consistency: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_nanbu_tvn_vs_timestep() {
    let fine = harness::run_sample(&spec(Algorithm::Nanbu, 5, Some(0.01), 100_000, 2))
        .unwrap()
        .summary
        .tvn
        .unwrap();
    let coarse = harness::run_sample(&spec(Algorithm::Nanbu, 5, Some(1.0), 100_000, 2))
        .unwrap()
        .summary
        .tvn
        .unwrap();
    assert!(
        (0.010..=0.030).contains(&fine),
        "nanbu dt=0.01 TVN {fine} outside 0.010..0.030"
    );
    assert!(
        (0.035..=0.065).contains(&coarse),
        "nanbu dt=1.0 TVN {coarse} outside 0.035..0.065"
    );
    assert!(fine < coarse, "expected fine {fine} < coarse {coarse}");
    println!("criterion 02 nanbu-timestep: PASS (tvn {fine:.4} at dt=0.01, {coarse:.4} at dt=1.0)");
}

#[test]
fn criterion_03_bird_tvn_near_noise_floor() {
    let bird = harness::run_sample(&spec(Algorithm::Bird, 50, None, 100_000, 3))
        .unwrap()
        .summary
        .tvn
        .unwrap();
    // Gaussian-oracle noise floor at the same sample size and binning.
    let mut s = RngStream::new(3, 1 << 40);
    let draws: Vec<f64> = (0..100_000).map(|_| s.standard_normal()).collect();
    let h = build_histogram(&draws, -5.0, 5.0, 0.1).unwrap();
    let gauss = |v: f64| (-0.5 * v * v).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let floor = tvn_vs_density(&h, gauss).unwrap();
    assert!(
        (0.005..=0.018).contains(&bird),
        "bird TVN {bird} outside 0.005..0.018"
    );
    assert!(
        (bird - floor).abs() <= 0.005,
        "bird TVN {bird} more than 0.005 from measured floor {floor}"
    );
    println!("criterion 03 bird-noise-floor: PASS (tvn {bird:.4}, floor {floor:.4})");
}

#[test]
fn criterion_04_poisson_ordering() {
    let (replicates, repeats) = if full_profile() {
        (100_000, 20)
    } else {
        (10_000, 10) // documented reduced profile; must preserve the ordering
    };
    let base = ExperimentSpec {
        algorithms: vec![Algorithm::Poisson, Algorithm::Nanbu, Algorithm::Bird],
        n_list: vec![5, 10, 20],
        dt_list: vec![0.01],
        replicates,
        tvn_repeats: repeats,
        seed: 4,
        ..ExperimentSpec::default()
    };
    let out = harness::run_compare(&base).unwrap();
    let cell = |alg: Algorithm, n: usize| {
        out.rows
            .iter()
            .find(|r| r.algorithm == alg && r.n == n)
            .unwrap()
    };
    for n in [5, 10, 20] {
        let p = cell(Algorithm::Poisson, n);
        for other in [Algorithm::Nanbu, Algorithm::Bird] {
            let o = cell(other, n);
            let margin = o.mean_tvn - p.mean_tvn;
            let se = ((p.sd_tvn.powi(2) + o.sd_tvn.powi(2)) / repeats as f64).sqrt();
            assert!(
                margin >= -2.0 * se,
                "poisson ({:.4}) not <= {} ({:.4}) + 2se ({se:.5}) at N={n}",
                p.mean_tvn,
                other.name(),
                o.mean_tvn
            );
        }
    }
    println!(
        "criterion 04 poisson-ordering: PASS ({} replicates x {} repeats)",
        replicates, repeats
    );
}

#[test]
fn criterion_05_energy_conservation() {
    // Conserving algorithms: relative drift <= 1e-9 on single runs.
    let cases = [
        (Algorithm::NanbuBabovsky, Some(0.01)),
        (Algorithm::Bird, None),
        (Algorithm::Poisson, None),
    ];
    for (algorithm, dt) in cases {
        let cfg = SimConfig {
            algorithm,
            n_particles: 1000,
            lambda: BKW_LAMBDA,
            t_final: 10.0,
            dt,
        };
        let mut s = RngStream::new(5, 0);
        let mut replay = s.clone();
        let result = algorithms::run(&cfg, &mut s).unwrap();
        let e0 = Ensemble::sample_initial(1000, &mut replay).unwrap().total_energy();
        let drift = (result.final_velocities.total_energy() - e0).abs() / e0;
        assert!(drift <= 1e-9, "{} drift {drift}", algorithm.name());
    }
    // Nanbu must visibly drift: it is the distinguishing behaviour.
    let cfg = SimConfig {
        algorithm: Algorithm::Nanbu,
        n_particles: 100,
        lambda: BKW_LAMBDA,
        t_final: 10.0,
        dt: Some(0.01),
    };
    let mut s = RngStream::new(5, 1);
    let mut replay = s.clone();
    let result = algorithms::run(&cfg, &mut s).unwrap();
    let e0 = Ensemble::sample_initial(100, &mut replay).unwrap().total_energy();
    let drift = (result.final_velocities.total_energy() - e0).abs() / e0;
    assert!(drift > 1e-9, "nanbu drift {drift} unexpectedly tiny");
    println!("criterion 05 energy-conservation: PASS (nanbu drift {drift:.3e})");
}

#[test]
fn criterion_06_n2_brute_force_oracle() {
    let draws = 100_000u64;
    let cfg = SimConfig {
        algorithm: Algorithm::Poisson,
        n_particles: 2,
        lambda: BKW_LAMBDA,
        t_final: 2.0,
        dt: None,
    };
    let sampler: Vec<f64> = (0..draws)
        .map(|r| {
            let mut s = RngStream::new(6, r);
            algorithms::run_exact_poisson(&cfg, &mut s).unwrap().v1
        })
        .collect();
    // Independent oracle: play the two-particle walk directly, processing a
    // Poisson(lambda * t) number of rotations.
    let oracle: Vec<f64> = (0..draws)
        .map(|r| {
            let mut s = RngStream::new(7, r);
            let mut v1 = analytic::sample_initial(&mut s);
            let mut v2 = analytic::sample_initial(&mut s);
            let k = s.poisson(BKW_LAMBDA * 2.0).unwrap();
            for _ in 0..k {
                let theta = Angle::sample(&mut s);
                (v1, v2) = collide(v1, v2, theta);
            }
            v1
        })
        .collect();
    let ks = ks_two_sample(sampler, oracle);
    assert!(ks <= 0.01, "KS distance {ks} exceeds 0.01");
    println!("criterion 06 n2-brute-force-oracle: PASS (KS {ks:.5})");
}

#[test]
fn criterion_07_collision_savings_formula() {
    for (n, t, seed) in [(50usize, 2.0f64, 8u64), (200, 1.0, 9)] {
        let s = ExperimentSpec {
            algorithms: vec![Algorithm::Poisson],
            n_list: vec![n],
            t_final: t,
            replicates: 100_000,
            seed,
            ..ExperimentSpec::default()
        };
        let mean = harness::run_sample(&s).unwrap().summary.collisions_saved_mean;
        let target = algorithms::expected_savings(n, BKW_LAMBDA, t);
        assert!(
            (mean - target).abs() <= 0.02 * target,
            "savings mean {mean} vs target {target} at (N={n}, t={t})"
        );
        println!("criterion 07 savings (N={n}, t={t}): mean {mean:.3} vs {target:.3}");
    }
    println!("criterion 07 collision-savings: PASS");
}

#[test]
fn criterion_08_perfect_sampler_stationary() {
    let full = full_profile();
    let draws = if full { 100_000 } else { 1_000 };
    let s = ExperimentSpec {
        n_list: vec![50],
        replicates: draws,
        seed: 10,
        epsilon: 1e-6,
        energy: Some(75.0), // (3/2) N
        ..ExperimentSpec::default()
    };
    let out = harness::run_perfect(&s).unwrap();
    let sum = &out.summary;
    let var_tol = if full { 0.05 } else { 0.15 };
    assert!(
        (sum.coordinate_variance - 1.5).abs() <= var_tol,
        "variance {} outside 1.5 +/- {var_tol}",
        sum.coordinate_variance
    );
    if full {
        assert!(
            sum.tvn_vs_limit <= 0.015,
            "TVN vs limit {} exceeds 0.015",
            sum.tvn_vs_limit
        );
    }
    // Known red: the sine-form coupling contracts the corner diameter at
    // measured rate ~0.26/N per step, which puts the N=50 backward coupling
    // time near 3200 (doubled horizon 4096). The 400..2000 window assumes a
    // ~3x faster contraction that the update as specified does not produce;
    // the stationary output itself is verified correct by the variance and
    // TVN checks above. Analysis: docs/acceptance notes in the README.
    assert!(
        (400.0..=2000.0).contains(&sum.coupling_time_mean),
        "coupling-time mean {} outside 400..2000 (measured contraction rate \
         ~0.26/N per step makes ~3200 the attainable minimum at N=50)",
        sum.coupling_time_mean
    );
    println!(
        "criterion 08 perfect-sampler: PASS ({} draws, var {:.3}, coupling mean {:.1}, tvn {:.4})",
        draws, sum.coordinate_variance, sum.coupling_time_mean, sum.tvn_vs_limit
    );
}

#[test]
fn criterion_09_cftp_structural_invariants() {
    // (a) diameter never increases along an update sequence.
    let mut s = RngStream::new(11, 0);
    let n = 8;
    let mut state = CornerState::fresh(n, 12.0).unwrap();
    let mut d_prev = state.max_pairwise_distance();
    for _ in 0..2000 {
        let theta = s.uniform(0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let pair = s.random_pair(n, true).unwrap();
        state.apply_update(&UpdateRecord { theta, pair });
        let d = state.max_pairwise_distance();
        assert!(d <= d_prev + 1e-13, "diameter grew {d_prev} -> {d}");
        d_prev = d;
    }
    // (b) doubling attempts reuse stored randomness bit-exactly.
    let stream = RngStream::new(11, 1);
    let mut h1 = UpdateHistory::new(6, stream.clone());
    for t in [1u64, 2, 4, 8, 16, 32, 64] {
        h1.extend_to(t);
    }
    let mut h2 = UpdateHistory::new(6, stream);
    h2.extend_to(64);
    assert_eq!(h1.records(), h2.records());
    // (c) same seed, same draw.
    let a = perfect::cftp_sample(12, 18.0, 1e-6, &mut RngStream::new(11, 2)).unwrap();
    let b = perfect::cftp_sample(12, 18.0, 1e-6, &mut RngStream::new(11, 2)).unwrap();
    assert_eq!(a, b);
    println!("criterion 09 cftp-structural: PASS");
}

#[test]
fn criterion_10_property_suites() {
    // collide: norm preservation and inverse rotation, 1e4 fuzz cases.
    let mut s = RngStream::new(12, 0);
    for _ in 0..10_000 {
        let vi = s.uniform(-10.0, 10.0).unwrap();
        let vj = s.uniform(-10.0, 10.0).unwrap();
        let theta = Angle::sample(&mut s);
        let (a, b) = collide(vi, vj, theta);
        let scale = (vi * vi + vj * vj).max(1.0);
        assert!((a * a + b * b - (vi * vi + vj * vj)).abs() <= 1e-12 * scale);
        let (ri, rj) = collide(a, b, theta.inverse());
        assert!((ri - vi).abs() <= 1e-12 * scale.sqrt());
        assert!((rj - vj).abs() <= 1e-12 * scale.sqrt());
    }
    // Round: exact on integers, unbiased on fractions.
    let n = 1_000_000;
    let ups = (0..n)
        .filter(|_| algorithms::round_probabilistic(2.3, &mut s).unwrap() == 3)
        .count();
    assert!((ups as f64 / n as f64 - 0.3).abs() < 0.005);
    let mean = (0..n)
        .map(|_| algorithms::round_probabilistic(7.64, &mut s).unwrap() as f64)
        .sum::<f64>()
        / n as f64;
    assert!((mean - 7.64).abs() < 0.01);
    // tvn metric axioms on 1e3 random probability-vector triples.
    let random_prob = |s: &mut RngStream| {
        let raw: Vec<f64> = (0..25).map(|_| s.u01() + 1e-12).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect::<Vec<f64>>()
    };
    for _ in 0..1000 {
        let p = random_prob(&mut s);
        let q = random_prob(&mut s);
        let r = random_prob(&mut s);
        let pq = tvn_discrete(&p, &q).unwrap();
        assert_eq!(pq, tvn_discrete(&q, &p).unwrap());
        assert!((0.0..=1.0).contains(&pq));
        assert!(pq <= tvn_discrete(&p, &r).unwrap() + tvn_discrete(&r, &q).unwrap() + 1e-12);
    }
    // Parallel and serial runs produce identical histograms and CSV bytes.
    let base = spec(Algorithm::Poisson, 20, None, 3000, 13);
    let serial = ExperimentSpec { workers: Some(1), ..base.clone() };
    let parallel = ExperimentSpec { workers: Some(4), ..base };
    let a = harness::run_sample(&serial).unwrap();
    let b = harness::run_sample(&parallel).unwrap();
    assert_eq!(a.histogram, b.histogram);
    let csv = |out: &harness::SampleOutput| {
        let mut buf = Vec::new();
        kacsim::harness::output::write_histogram_csv(&mut buf, &out.histogram, out.target_probs.as_deref())
            .unwrap();
        buf
    };
    assert_eq!(csv(&a), csv(&b));
    println!("criterion 10 property-suites: PASS");
}

/// Full-profile only: the four samplers agree pairwise at large N. The
/// pairwise two-sample TVN floor at 1e5 draws sits near 0.014, so the 0.01
/// agreement bound needs 3e5 draws per algorithm to be meaningful.
#[test]
fn full_profile_pairwise_agreement_large_n() {
    if !full_profile() {
        println!("pairwise-agreement: SKIPPED (set KACSIM_ACCEPTANCE_FULL=1)");
        return;
    }
    let replicates = 300_000;
    let algorithms = [
        Algorithm::Nanbu,
        Algorithm::NanbuBabovsky,
        Algorithm::Bird,
        Algorithm::Poisson,
    ];
    let mut hists: Vec<Histogram> = Vec::new();
    for algorithm in algorithms {
        let dt = algorithm.uses_dt().then_some(0.01);
        let out = harness::run_sample(&spec(algorithm, 1000, dt, replicates, 14)).unwrap();
        hists.push(out.histogram);
    }
    for i in 0..hists.len() {
        for j in (i + 1)..hists.len() {
            let tvn = tvn_discrete(
                &hists[i].empirical_probs().unwrap(),
                &hists[j].empirical_probs().unwrap(),
            )
            .unwrap();
            assert!(
                tvn <= 0.01,
                "{} vs {}: pairwise TVN {tvn}",
                algorithms[i].name(),
                algorithms[j].name()
            );
        }
    }
    let _ = CANONICAL_BINNING;
    println!("pairwise-agreement: PASS");
}
