//! Scan the imaginary axis k = i kappa for zeros of the Wronskian and of
//! the auxiliary function s-: bound states, anti-bound states and
//! transmission resonances of a square well.

use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::{scan_axis, Target};

fn main() {
    let spec = PotentialSpec::square_well(3.0, 1.0).unwrap();

    println!("w(i kappa) zeros:");
    let mut pts = scan_axis(&spec, Target::WFunction, 0.05, 2.5, 100).unwrap();
    pts.extend(scan_axis(&spec, Target::WFunction, -2.5, -0.05, 100).unwrap());
    for p in &pts {
        println!("  kappa = {:>20.15}  {:?}  |w| = {:.2e}", p.kappa(), p.class, p.residual);
    }

    println!("s-(i kappa) zeros:");
    for p in scan_axis(&spec, Target::SMinusFunction, -2.5, -0.05, 100).unwrap() {
        println!("  kappa = {:>20.15}  {:?}  |s-| = {:.2e}", p.kappa(), p.class, p.residual);
    }
}
