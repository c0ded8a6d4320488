//! The three analytic velocity densities: initial, time-t, and stationary.
//!
//! ```bash
//! cargo run --release --example density_curves
//! ```

use kacsim::analytic::{c_of_t, exact_density, DensityCurve};
use kacsim::quad::adaptive_simpson;

fn main() {
    println!("interpolation coefficient C(t) = 1/(3 - 2 exp(-sqrt(pi) t/16)):");
    for t in [0.0, 1.0, 2.0, 5.0, 10.0, f64::INFINITY] {
        println!("  C({t:>4}) = {:.6}", c_of_t(t).unwrap());
    }

    println!("\ndensity at selected velocities:");
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "v", "t=0", "t=1", "t=2", "t=inf");
    for k in 0..=8 {
        let v = k as f64 * 0.5;
        print!("{v:>6.1}");
        for t in [0.0, 1.0, 2.0, f64::INFINITY] {
            print!(" {:>12.6}", exact_density(v, t).unwrap());
        }
        println!();
    }

    println!("\nquadrature checks (each curve is a probability density with");
    println!("second moment 3/2, the conserved energy per particle):");
    for t in [0.0, 0.5, 2.0, f64::INFINITY] {
        let f = |v: f64| exact_density(v, t).unwrap();
        let mass = adaptive_simpson(&f, -8.0, 8.0, 1e-12);
        let second = adaptive_simpson(&|v| v * v * f(v), -10.0, 10.0, 1e-10);
        println!("  t = {t:>4}: mass = {mass:.10}, second moment = {second:.10}");
    }

    // The curve enum is what the metrics and harness layers consume.
    let curve = DensityCurve::Exact { t: 2.0 };
    println!("\ncurve label: {}, f(1.0) = {:.6}", curve.label(), curve.eval(1.0));
}
