//! Self-contained cross-checks against closed forms and conserved
//! quantities. Each check compares one observed number to a target with an
//! explicit tolerance, so a report reads as a pass/fail table.

use num_complex::Complex64;

use crate::branch::{linear_fit, seed_branch, sweep_eps};
use crate::error::Result;
use crate::glue::ode_residual_sup;
use crate::nlsolve::BCSignature;
use crate::oracle::{delta_state, squarewell_scattering};
use crate::potential::PotentialSpec;
use crate::scattering::scattering_data;
use crate::spectrum::{scan_axis, Target};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub target: f64,
    pub observed: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn pass(&self) -> bool {
        (self.observed - self.target).abs() <= self.tolerance
    }
}

fn check(name: &str, target: f64, observed: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        target,
        observed,
        tolerance,
    }
}

/// Run every check whose name contains `filter` (all of them when None).
pub fn run_validation(filter: Option<&str>) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let wants = |name: &str| filter.map_or(true, |f| name.contains(f));

    // Square well Wronskian and s_minus against the closed form.
    let spec = PotentialSpec::square_well(2.0, 1.0)?;
    for &(re, im) in &[(0.7, 0.0), (1.3, 0.4), (-0.2, 1.1)] {
        let name = format!("squarewell_w_closed_form_k={re}{im:+}i");
        if wants(&name) {
            let k = Complex64::new(re, im);
            let d = scattering_data(&spec, k)?;
            let oracle = squarewell_scattering(2.0, 1.0, k);
            out.push(check(&name, 0.0, (d.w - oracle.w).norm(), 1e-8 * oracle.w.norm()));
            let name_s = format!("squarewell_sminus_closed_form_k={re}{im:+}i");
            out.push(check(
                &name_s,
                0.0,
                (d.s_minus - oracle.s_minus).norm(),
                1e-8 * (1.0 + oracle.s_minus.norm()),
            ));
        }
    }

    // Flux conservation on the real axis: |t|^2 + |r|^2 = 1.
    for &kr in &[0.5, 1.0, 2.5] {
        let name = format!("unitarity_k={kr}");
        if wants(&name) {
            let d = scattering_data(&spec, Complex64::new(kr, 0.0))?;
            let sum = d.t.unwrap().norm_sqr() + d.r_minus.unwrap().norm_sqr();
            out.push(check(&name, 1.0, sum, 1e-9));
        }
    }

    // Delta potential: the oracle mass obeys N = 4 nu + 2 alpha exactly.
    if wants("delta_closed_form_mass") {
        let st = delta_state(1.0, -1.0)?;
        out.push(check("delta_closed_form_mass", 4.0 + 2.0, st.mass, 1e-12));
    }

    // Small-eps mass law at a simple bound state: N -> 0 linearly.
    if wants("bound_seed_mass") {
        let p = scan_axis(&spec, Target::WFunction, 0.05, 1.4, 40)?.remove(0);
        let g = seed_branch(&spec, &p, 1e-6)?;
        out.push(check("bound_seed_mass", 0.0, g.n, 1e-4));
    }

    // Glue invariants on a moderately nonlinear state: matching jumps and
    // the global equation residual.
    if wants("glue_jump_residual") || wants("glue_ode_residual") {
        let p = scan_axis(&spec, Target::WFunction, 0.05, 1.4, 40)?.remove(0);
        let sig = BCSignature::bound_state();
        let states = sweep_eps(&spec, sig, p.kappa(), &[1e-3, 1e-2, 0.1])?;
        let g = states.last().unwrap();
        if wants("glue_jump_residual") {
            let r = &g.residuals;
            let jump = r
                .psi_jump_b
                .abs()
                .max(r.dpsi_jump_b.abs())
                .max(r.psi_jump_mb.abs())
                .max(r.dpsi_jump_mb.abs());
            out.push(check("glue_jump_residual", 0.0, jump, 1e-9));
        }
        if wants("glue_ode_residual") {
            let amp = (2.0 * (-g.e)).sqrt();
            out.push(check(
                "glue_ode_residual",
                0.0,
                ode_residual_sup(&spec, g)?,
                1e-6 * amp,
            ));
        }
    }

    // Outward drift of the matching point: x_R ~ -ln(eps) / (2 |k*|)
    // along an anti-bound branch.
    if wants("antibound_drift_slope") {
        let barrier = PotentialSpec::square_well(-6.0, 0.1)?;
        let p = scan_axis(&barrier, Target::WFunction, -3.0, -0.05, 120)?.remove(0);
        let k_star = p.k_star.im;
        let sig = BCSignature::scattering_resonance();
        let eps: Vec<f64> = (0..13).map(|j| 1e-6 * 10f64.powf(j as f64 / 4.0)).collect();
        let states = sweep_eps(&barrier, sig, k_star, &eps)?;
        let xs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
        let ys: Vec<f64> = states.iter().map(|g| g.x_r).collect();
        let (slope, _) = linear_fit(&xs, &ys);
        let target = -1.0 / (2.0 * k_star);
        out.push(check("antibound_drift_slope", target, slope, 0.02 * target.abs()));
    }

    Ok(out)
}

/// Fixed-width pass/fail table.
pub fn format_table(checks: &[CheckResult]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<42} {:>24} {:>24} {:>12} {:>6}\n",
        "check", "target", "observed", "tolerance", "status"
    ));
    for c in checks {
        s.push_str(&format!(
            "{:<42} {:>24.16e} {:>24.16e} {:>12.3e} {:>6}\n",
            c.name,
            c.target,
            c.observed,
            c.tolerance,
            if c.pass() { "pass" } else { "FAIL" }
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let checks = run_validation(None).unwrap();
        assert!(checks.len() >= 10);
        for c in &checks {
            assert!(c.pass(), "{} target {} observed {}", c.name, c.target, c.observed);
        }
    }

    #[test]
    fn filter_selects_a_subset() {
        let checks = run_validation(Some("unitarity")).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.name.contains("unitarity")));
    }
}
