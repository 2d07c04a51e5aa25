//! The branch emanating from a zero-energy resonance. For the critical
//! square well (depth pi^2/4) the matching point tends to 3/4 and the
//! energy vanishes linearly, E/eps -> -2/pi^2.

use nlsbif::branch::{linear_fit, threshold_branch, Controls};
use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::Parity;

fn main() {
    let spec = PotentialSpec::square_well(std::f64::consts::PI.powi(2) / 4.0, 1.0).unwrap();
    let controls = Controls { eps_max: 1e-2, ..Controls::default() };
    let curve = threshold_branch(&spec, Parity::Odd, &controls).unwrap();
    println!("{} points, termination {:?}", curve.points.len(), curve.termination);

    println!("{:>12} {:>22} {:>20} {:>20}", "eps", "E/eps", "x_R", "N");
    for g in curve.points.iter().step_by(8) {
        println!("{:>12.4e} {:>22.15} {:>20.15} {:>20.15}", g.eps, g.e / g.eps, g.x_r, g.n);
    }

    let eps: Vec<f64> = curve.points.iter().map(|g| g.eps).collect();
    let xr: Vec<f64> = curve.points.iter().map(|g| g.x_r).collect();
    let (_, x_r0) = linear_fit(&eps, &xr);
    println!("x_R(eps -> 0) = {x_r0:.8}   (exact 3/4)");
    println!("E/eps  -> {:.8}   (exact -2/pi^2 = {:.8})",
        curve.points[0].e / curve.points[0].eps,
        -2.0 / std::f64::consts::PI.powi(2));
}
