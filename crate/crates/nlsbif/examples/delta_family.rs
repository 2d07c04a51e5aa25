//! The delta potential admits a closed-form branch: the profile is two
//! soliton flanks matched at the origin, with x_R = artanh(alpha/2nu)/nu
//! and N = 4 nu + 2 alpha for E below the threshold -alpha^2/4.

use nlsbif::oracle::{delta_state, delta_threshold};

fn main() {
    for &alpha in &[1.0, -1.0] {
        let e_star = delta_threshold(alpha);
        println!("alpha = {alpha}: branch exists for E < {e_star}");
        println!("{:>8} {:>20} {:>20} {:>20}", "E", "x_R", "x_L", "N");
        for i in 1..=6 {
            let e = e_star - 0.4 * i as f64;
            let st = delta_state(alpha, e).unwrap();
            println!("{e:>8.2} {:>20.15} {:>20.15} {:>20.15}", st.x_r, st.x_l, st.mass);
        }
        println!();
    }
    // At the threshold the state degenerates; the constructor refuses it.
    assert!(delta_state(1.0, delta_threshold(1.0)).is_err());
}
