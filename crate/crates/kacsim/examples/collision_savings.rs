//! The exact-Poisson sampler never propagates the ensemble after the last
//! particle-1 collision. This example checks its savings telemetry against
//! the closed form (N/2)(1 - exp(-lambda t)).
//!
//! ```bash
//! cargo run --release --example collision_savings
//! ```

use kacsim::algorithms::{expected_savings, Algorithm};
use kacsim::analytic::BKW_LAMBDA;
use kacsim::harness::{run_sample, ExperimentSpec};

fn main() {
    let replicates = 20_000;
    println!("skipped-collision accounting over {replicates} replicates\n");
    println!(
        "{:>5} {:>5} {:>14} {:>14} {:>12}",
        "n", "t", "measured mean", "closed form", "processed"
    );
    for (n, t) in [(20usize, 1.0f64), (50, 2.0), (200, 1.0), (500, 0.5)] {
        let spec = ExperimentSpec {
            algorithms: vec![Algorithm::Poisson],
            n_list: vec![n],
            t_final: t,
            replicates,
            seed: 23,
            ..ExperimentSpec::default()
        };
        let out = run_sample(&spec).unwrap();
        println!(
            "{n:>5} {t:>5} {:>14.3} {:>14.3} {:>12.1}",
            out.summary.collisions_saved_mean,
            expected_savings(n, BKW_LAMBDA, t),
            out.summary.collisions_processed_mean
        );
    }
    println!("\nthe savings approach N/2 collisions per replicate once lambda*t >> 1.");
}
