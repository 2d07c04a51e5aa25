//! Count and locate scattering resonances in the lower half plane with
//! the argument principle, then verify the mirror symmetry k -> -conj(k)
//! of the resonance pairs.

use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::{count_zeros_box, locate_complex_zeros, Rect, Target};

fn main() {
    let spec = PotentialSpec::square_well(8.0, 1.0).unwrap();
    let rect = Rect { re_min: -4.0, re_max: 4.0, im_min: -2.0, im_max: -0.05 };

    let n = count_zeros_box(&spec, Target::WFunction, rect).unwrap();
    println!("zeros of w in the box: {n}");

    let zeros = locate_complex_zeros(&spec, Target::WFunction, rect, 16).unwrap();
    for p in &zeros {
        println!("  k = {:>22.15} {:>+22.15} i  |w(k)| = {:.2e}", p.k_star.re, p.k_star.im, p.residual);
    }
    for p in &zeros {
        let mirror = -p.k_star.conj();
        let ok = zeros.iter().any(|q| (q.k_star - mirror).norm() < 1e-9);
        assert!(ok, "missing mirror partner of {}", p.k_star);
    }
    println!("every resonance has its -conj(k) partner");
}
