//! A square well of depth pi^2/4 has a zero-energy resonance: w(0) = 0
//! with a bounded Neumann mode of odd parity. Detect it and print the
//! mode data carried on the spectral point.

use nlsbif::potential::PotentialSpec;
use nlsbif::spectrum::detect_threshold;

fn main() {
    let alpha = std::f64::consts::PI.powi(2) / 4.0;
    let spec = PotentialSpec::square_well(alpha, 1.0).unwrap();
    let p = detect_threshold(&spec).unwrap().expect("threshold resonance");
    println!("class   : {:?}", p.class);
    println!("parity  : {:?}", p.parity);
    println!("|w(0)|  : {:.2e}", p.residual);
    // The exact zero-energy mode is sin(pi x / 2): odd.
    assert_eq!(p.parity, nlsbif::spectrum::Parity::Odd);

    // A slightly shallower well has no threshold resonance.
    let off = PotentialSpec::square_well(alpha - 0.1, 1.0).unwrap();
    assert!(detect_threshold(&off).unwrap().is_none());
    println!("depth {alpha:.6} is critical; {:.6} is not", alpha - 0.1);
}
