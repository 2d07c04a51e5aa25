//! Closed-form references: delta-potential nonlinear states, square-well
//! scattering data, and free 1-soliton facts.
//!
//! Nothing here goes through the ODE integrator; these formulas are used
//! as ground truth by the validation suite and by tests of the gluing
//! layer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scattering::ScatteringData;

/// `S(x; E) = sqrt(-2E) sech(sqrt(-E) x)`, the free 1-soliton profile.
pub fn soliton(x: f64, e: f64) -> f64 {
    let nu = (-e).sqrt();
    (2.0 * -e).sqrt() / (nu * x).cosh()
}

pub fn soliton_deriv(x: f64, e: f64) -> f64 {
    let nu = (-e).sqrt();
    let sech = 1.0 / (nu * x).cosh();
    -(2.0 * -e).sqrt() * nu * sech * (nu * x).tanh()
}

#[derive(Debug, Clone, Copy)]
pub struct SolitonFacts {
    pub peak: f64,
    pub mass: f64,
}

/// Peak amplitude and L2 mass of the 1-soliton at energy `E < 0`.
pub fn soliton_facts(e: f64) -> SolitonFacts {
    SolitonFacts {
        peak: (2.0 * -e).sqrt(),
        mass: 4.0 * (-e).sqrt(),
    }
}

/// Closed-form nonlinear state for the Dirac delta potential
/// `V = alpha delta(x)` at energy `E < -alpha^2/4`.
#[derive(Debug, Clone)]
pub struct DeltaState {
    pub alpha: f64,
    pub e: f64,
    pub x_r: f64,
    pub x_l: f64,
    pub mass: f64,
}

impl DeltaState {
    /// The two-sided translated-soliton profile.
    pub fn profile(&self, x: f64) -> f64 {
        if x >= 0.0 {
            soliton(x - self.x_r, self.e)
        } else {
            soliton(x - self.x_l, self.e)
        }
    }

    pub fn profile_deriv(&self, x: f64) -> f64 {
        if x >= 0.0 {
            soliton_deriv(x - self.x_r, self.e)
        } else {
            soliton_deriv(x - self.x_l, self.e)
        }
    }
}

pub fn delta_state(alpha: f64, e: f64) -> Result<DeltaState> {
    let e_star = -alpha * alpha / 4.0;
    if e >= e_star {
        return Err(Error::AboveThreshold);
    }
    let nu = (-e).sqrt();
    let x_r = (alpha / (2.0 * nu)).atanh() / nu;
    // Mass: both half-line integrals of the translated sech^2 in closed form.
    let mass = 4.0 * nu * (1.0 + (nu * x_r).tanh());
    Ok(DeltaState {
        alpha,
        e,
        x_r,
        x_l: -x_r,
        mass,
    })
}

/// Threshold energy `E_star(alpha) = -alpha^2/4` of the delta branch.
pub fn delta_threshold(alpha: f64) -> f64 {
    -alpha * alpha / 4.0
}

/// `sin(z)/z`, stable for small complex `z`.
fn sinc_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        // 1 - z^2/6 + z^4/120
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Analytic scattering data of the square well `V = -alpha` on `[-b, b]`,
/// by trigonometric matching with interior wavenumber `q = sqrt(k^2 + alpha)`.
///
/// Everything is expressed through `cos(q .)` and `sin(q .)/q`, which are
/// even in `q`, so the branch of the square root is immaterial.
pub fn squarewell_scattering(alpha: f64, b: f64, k: Complex64) -> ScatteringData {
    let q = (k * k + alpha).sqrt();
    let two_ik = Complex64::new(0.0, 2.0) * k;
    let e2ikb = (Complex64::new(0.0, 1.0) * k * 2.0 * b).exp();
    let c2 = (2.0 * b * q).cos();
    let s2q = 2.0 * b * sinc_c(2.0 * b * q); // sin(2bq)/q
    // w(k) = e^{2ikb} [ sin(2qb)(q + k^2/q) + 2ik cos(2qb) ]
    //      = e^{2ikb} [ (q^2 + k^2) sin(2qb)/q + 2ik cos(2qb) ]
    let w = e2ikb * ((q * q + k * k) * s2q + two_ik * c2);
    // s_-(k) = -alpha sin(2qb)/q; even in k, so s_+ = s_-.
    let s_minus = -alpha * s2q;
    let s_plus = s_minus;
    ScatteringData::assemble(k, w, s_minus, s_plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn soliton_facts_values() {
        let f = soliton_facts(-1.0);
        assert_relative_eq!(f.peak, 2.0f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(f.mass, 4.0, epsilon = 1e-15);
        assert_relative_eq!(soliton_facts(-4.0).mass, 8.0, epsilon = 1e-15);
    }

    #[test]
    fn soliton_mass_matches_quadrature() {
        // Composite Simpson on [-60, 60] at E = -0.7.
        let e = -0.7;
        let n = 200_000;
        let (a, bb) = (-60.0, 60.0);
        let h = (bb - a) / n as f64;
        let mut sum = soliton(a, e).powi(2) + soliton(bb, e).powi(2);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            let x = a + i as f64 * h;
            sum += w * soliton(x, e).powi(2);
        }
        sum *= h / 3.0;
        assert_relative_eq!(sum, soliton_facts(e).mass, epsilon = 1e-10);
    }

    #[test]
    fn delta_state_centers() {
        let s = delta_state(1.0, -1.0).unwrap();
        assert_relative_eq!(s.x_r, 0.5f64.atanh(), epsilon = 1e-14);
        assert_relative_eq!(s.x_r, 0.5493061443340549, epsilon = 1e-12);
        let well = delta_state(-1.0, -1.0).unwrap();
        assert_relative_eq!(well.x_r, -0.5f64.atanh(), epsilon = 1e-14);
        assert!(well.x_r < 0.0);
    }

    #[test]
    fn delta_state_rejects_energy_above_threshold() {
        assert!(matches!(delta_state(1.0, -0.2), Err(Error::AboveThreshold)));
    }

    #[test]
    fn delta_mass_limits() {
        // Barrier: N -> 8 sqrt(-E_star) = 4 alpha; well: N -> 0.
        let n_barrier = delta_state(1.0, -0.25 - 1e-12).unwrap().mass;
        assert_relative_eq!(n_barrier, 4.0, max_relative = 1e-5);
        let n_well = delta_state(-1.0, -0.25 - 1e-12).unwrap().mass;
        assert!(n_well.abs() < 1e-4);
    }

    #[test]
    fn delta_jump_condition() {
        // psi'(0+) - psi'(0-) = alpha psi(0), from the closed forms.
        for &(alpha, e) in &[(1.0, -1.0), (-1.0, -1.0), (0.7, -2.3)] {
            let s = delta_state(alpha, e).unwrap();
            let jump = soliton_deriv(-s.x_r, e) - soliton_deriv(-s.x_l, e);
            let val = soliton(-s.x_r, e);
            assert_relative_eq!(jump, alpha * val, epsilon = 1e-10);
            // Continuity at 0 is automatic from x_L = -x_R and evenness.
            assert_relative_eq!(soliton(-s.x_l, e), val, epsilon = 1e-13);
        }
    }

    #[test]
    fn squarewell_free_limit() {
        let k = Complex64::new(3.0, 0.0);
        let d = squarewell_scattering(0.0, 1.0, k);
        assert_relative_eq!(d.w.im, 6.0, epsilon = 1e-12);
        assert_relative_eq!(d.w.re, 0.0, epsilon = 1e-12);
        assert!(d.s_minus.norm() < 1e-14);
        let t = d.t.unwrap();
        assert_relative_eq!(t.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn squarewell_threshold_resonance() {
        let a = std::f64::consts::PI.powi(2) / 4.0;
        let d = squarewell_scattering(a, 1.0, Complex64::new(0.0, 0.0));
        assert!(d.w.norm() < 1e-14);
    }

    #[test]
    fn squarewell_unitarity() {
        let d = squarewell_scattering(2.0, 1.0, Complex64::new(1.7, 0.0));
        let t = d.t.unwrap().norm_sqr();
        let r = d.r_minus.unwrap().norm_sqr();
        assert_relative_eq!(t + r, 1.0, epsilon = 1e-12);
    }
}
