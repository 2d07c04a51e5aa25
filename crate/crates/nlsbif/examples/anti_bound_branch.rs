//! A thin repulsive barrier has an anti-bound state at k = i kappa_r with
//! kappa_r < 0. The nonlinear branch seeded there starts at a finite mass
//! N -> 8 |kappa_r| and its matching point drifts outward like
//! x_R ~ -ln(eps) / (2 |kappa_r|).

use nlsbif::branch::{linear_fit, seed_branch, sweep_eps};
use nlsbif::nlsolve::BCSignature;
use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::{scan_axis, Target};

fn main() {
    let spec = PotentialSpec::square_well(-6.0, 0.1).unwrap();
    let seed = scan_axis(&spec, Target::WFunction, -3.0, -0.05, 120)
        .unwrap()
        .remove(0);
    let kappa_r = seed.kappa();
    println!("anti-bound state at kappa = {kappa_r:.15}");

    let g0 = seed_branch(&spec, &seed, 1e-6).unwrap();
    println!("N(eps=1e-6) = {:.10}   8|kappa_r| = {:.10}", g0.n, 8.0 * kappa_r.abs());

    let eps: Vec<f64> = (0..25).map(|j| 1e-6 * 10f64.powf(j as f64 / 8.0)).collect();
    let states = sweep_eps(&spec, BCSignature::scattering_resonance(), kappa_r, &eps).unwrap();
    let xs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = states.iter().map(|g| g.x_r).collect();
    let (slope, _) = linear_fit(&xs, &ys);
    println!("drift slope dx_R/dln(1/eps) = {:.8}", slope);
    println!("predicted -1/(2 kappa_r)    = {:.8}", -1.0 / (2.0 * kappa_r));
}
