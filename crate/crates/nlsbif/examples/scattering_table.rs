//! Transmission and reflection across a square well, tabulated on the
//! real axis. Flux conservation |t|^2 + |r|^2 = 1 holds at every k.

use num_complex::Complex64;

use nlsbif::potential::PotentialSpec;
use nlsbif::scattering::scattering_data;

fn main() {
    let spec = PotentialSpec::square_well(2.0, 1.0).unwrap();
    println!("{:>6} {:>22} {:>22} {:>14}", "k", "|t|^2", "|r|^2", "defect");
    for i in 1..=12 {
        let k = 0.25 * i as f64;
        let d = scattering_data(&spec, Complex64::new(k, 0.0)).unwrap();
        let t2 = d.t.unwrap().norm_sqr();
        let r2 = d.r_minus.unwrap().norm_sqr();
        println!("{k:>6.2} {t2:>22.16} {r2:>22.16} {:>14.3e}", t2 + r2 - 1.0);
    }
}
