//! Deepening a square well makes a conjugate pair of resonances collide
//! on the imaginary axis and split into two anti-bound states. The scan
//! brackets the collision while the argument-principle count certifies
//! that no zero entered or left the search box.

use nlsbif::branch::coalescence_scan;
use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::{Rect, Target};

fn main() {
    let alphas: Vec<f64> = (0..8).map(|i| 8.0 + 0.2 * i as f64).collect();
    let rect = Rect { re_min: -1.0, re_max: 1.0, im_min: -2.0, im_max: -0.05 };
    let report = coalescence_scan(
        |a| PotentialSpec::square_well(a, 1.0),
        &alphas,
        Target::WFunction,
        (-2.2, -0.05),
        rect,
    )
    .unwrap();

    println!("{:>8} {:>10} {:>30}", "alpha", "box count", "axis zeros (kappa)");
    for s in &report.samples {
        let zeros: Vec<String> = s.axis_zeros.iter().map(|z| format!("{z:.6}")).collect();
        println!("{:>8.2} {:>10} {:>30}", s.alpha, s.box_count, zeros.join(", "));
    }
    let (lo, hi) = report.bracket.expect("coalescence bracket");
    println!("pair lands on the axis between alpha = {lo} and {hi}");
}
