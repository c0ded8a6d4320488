//! Accuracy of the Nanbu sampler as the time step shrinks: TVN against the
//! closed-form solution at t = 2, N = 5.
//!
//! ```bash
//! cargo run --release --example nanbu_timestep
//! ```

use kacsim::algorithms::Algorithm;
use kacsim::harness::{run_sample, ExperimentSpec};

fn main() {
    let replicates = 100_000;
    println!("nanbu, N = 5, t = 2, {replicates} replicates per point\n");
    println!("{:>8} {:>10}", "dt", "tvn");
    for dt in [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.01] {
        let spec = ExperimentSpec {
            algorithms: vec![Algorithm::Nanbu],
            n_list: vec![5],
            dt_list: vec![dt],
            replicates,
            seed: 11,
            ..ExperimentSpec::default()
        };
        let out = run_sample(&spec).unwrap();
        println!("{dt:>8} {:>10.4}", out.summary.tvn.unwrap());
    }
    println!(
        "\nthe TVN estimate bottoms out near the binning noise floor for this\n\
         sample size (~0.01 at 1e5 draws), not at zero; the residual above\n\
         the floor at coarse dt is the time-discretization error."
    );
}
