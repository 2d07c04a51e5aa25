//! Trace the nonlinear bound-state branch bifurcating from the linear
//! bound state of a square well. Near the bifurcation the mass N vanishes
//! and E approaches the linear eigenvalue -kappa*^2.

use nlsbif::branch::{trace_branch, Controls};
use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::{scan_axis, Target};

fn main() {
    let spec = PotentialSpec::square_well(2.0, 1.0).unwrap();
    let seed = scan_axis(&spec, Target::WFunction, 0.05, 1.4, 40)
        .unwrap()
        .remove(0);
    println!("seed: kappa* = {:.15}, E_lin = {:.15}", seed.kappa(), -seed.kappa().powi(2));

    let controls = Controls { e_min: -6.0, ..Controls::default() };
    let curve = trace_branch(&spec, &seed, &controls).unwrap();
    println!(
        "{} points, termination {:?}, steps {}/{} accepted/rejected",
        curve.points.len(),
        curve.termination,
        curve.arclength_steps.accepted,
        curve.arclength_steps.rejected
    );

    println!("{:>12} {:>20} {:>20}", "eps", "E", "N");
    let stride = (curve.points.len() / 10).max(1);
    for g in curve.points.iter().step_by(stride) {
        println!("{:>12.4e} {:>20.15} {:>20.15}", g.eps, g.e, g.n);
    }
}
