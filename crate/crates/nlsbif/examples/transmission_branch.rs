//! Transmission resonances are zeros of s-(i kappa), not of the
//! Wronskian. They also seed nonlinear states, with the mass threshold
//! N -> 4 |kappa_t| instead of 8 |kappa_t|.

use nlsbif::branch::seed_branch;
use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::{scan_axis, Target};

fn main() {
    // alpha = 3 puts a transmission resonance at kappa_t = -sqrt(3 - pi^2/4).
    let spec = PotentialSpec::square_well(3.0, 1.0).unwrap();
    let kappa_exact = -(3.0 - std::f64::consts::PI.powi(2) / 4.0).sqrt();

    let pts = scan_axis(&spec, Target::SMinusFunction, -2.0, -0.05, 80).unwrap();
    for p in &pts {
        println!("s- zero at kappa = {:.15}  {:?}", p.kappa(), p.class);
    }
    let p = pts
        .iter()
        .find(|p| (p.kappa() - kappa_exact).abs() < 1e-6)
        .expect("transmission resonance");

    let g = seed_branch(&spec, p, 1e-6).unwrap();
    println!("N(eps=1e-6)  = {:.10}", g.n);
    println!("4 |kappa_t|  = {:.10}", 4.0 * kappa_exact.abs());
    println!("E            = {:.10} (vs -kappa_t^2 = {:.10})", g.e, -kappa_exact.powi(2));
}
