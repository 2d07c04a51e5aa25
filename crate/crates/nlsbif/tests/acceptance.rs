//! End-to-end acceptance checks. Each test prints one pass/fail line with
//! the observed figure of merit; tolerances are stated inline.

use num_complex::Complex64;

use nlsbif::branch::{linear_fit, seed_branch, sweep_eps, threshold_branch, trace_branch, Controls};
use nlsbif::glue::ode_residual_sup;
use nlsbif::nlsolve::{df_dkappa_formula, shoot, BCSignature};
use nlsbif::oracle::{delta_state, squarewell_scattering};
use nlsbif::potential::PotentialSpec;
use nlsbif::scattering::scattering_data;
use nlsbif::spectrum::{detect_threshold, mode_and_nondegeneracy, scan_axis, Parity, Target};
use nlsbif::validate::run_validation;

fn report(name: &str, ok: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if ok { "pass" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn well2() -> PotentialSpec {
    PotentialSpec::square_well(2.0, 1.0).unwrap()
}

fn critical_well() -> PotentialSpec {
    PotentialSpec::square_well(std::f64::consts::PI.powi(2) / 4.0, 1.0).unwrap()
}

fn barrier() -> PotentialSpec {
    PotentialSpec::square_well(-6.0, 0.1).unwrap()
}

fn anti_bound_point(spec: &PotentialSpec) -> nlsbif::SpectralPoint {
    scan_axis(spec, Target::WFunction, -3.0, -0.05, 120)
        .unwrap()
        .remove(0)
}

#[test]
fn criterion_01_unitarity() {
    let spec = well2();
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let k = 0.1 + 9.9 * i as f64 / 49.0;
        let d = scattering_data(&spec, Complex64::new(k, 0.0)).unwrap();
        let defect = (d.r_minus.unwrap().norm_sqr() + d.t.unwrap().norm_sqr() - 1.0).abs();
        worst = worst.max(defect);
    }
    report(
        "criterion 01 unitarity",
        worst < 1e-8,
        &format!("max | |r|^2+|t|^2 - 1 | = {worst:.3e} (< 1e-8)"),
    );
}

#[test]
fn criterion_02_closed_form_cross_check() {
    let spec = well2();
    let mut worst: f64 = 0.0;
    for i in 0..21 {
        for j in 0..21 {
            let k = Complex64::new(-2.0 + 0.2 * i as f64, -2.0 + 0.2 * j as f64);
            let d = scattering_data(&spec, k).unwrap();
            let oracle = squarewell_scattering(2.0, 1.0, k);
            let scale = oracle.w.norm().max(1.0);
            worst = worst.max((d.w - oracle.w).norm() / scale);
            let scale_s = oracle.s_minus.norm().max(1.0);
            worst = worst.max((d.s_minus - oracle.s_minus).norm() / scale_s);
        }
    }
    report(
        "criterion 02 closed-form cross-check",
        worst < 1e-8,
        &format!("max relative error over 21x21 grid = {worst:.3e} (< 1e-8)"),
    );
}

#[test]
fn criterion_03_threshold_detection() {
    let spec = critical_well();
    let p = detect_threshold(&spec).unwrap();
    let ok = p
        .as_ref()
        .map(|p| p.parity == Parity::Odd && p.residual < 1e-6)
        .unwrap_or(false);
    let detail = match &p {
        Some(p) => format!("|w(0)| = {:.3e}, parity {:?} (expect Odd)", p.residual, p.parity),
        None => "no threshold found".to_string(),
    };
    report("criterion 03 threshold detection", ok, &detail);
}

#[test]
fn criterion_04_threshold_x_r_limit() {
    let spec = critical_well();
    let controls = Controls { eps_max: 1e-2, ..Controls::default() };
    let curve = threshold_branch(&spec, Parity::Odd, &controls).unwrap();
    // x_R(eps) is linear in eps at the bottom of the sweep; extrapolate
    // from the first two points.
    let (g1, g2) = (&curve.points[0], &curve.points[1]);
    let slope = (g2.x_r - g1.x_r) / (g2.eps - g1.eps);
    let x_r0 = g1.x_r - slope * g1.eps;
    report(
        "criterion 04 threshold x_R limit",
        (x_r0 - 0.75).abs() < 1e-3,
        &format!("x_R(0) = {x_r0:.8} (0.75 +- 1e-3)"),
    );
}

#[test]
fn criterion_05_threshold_energy_slope() {
    let spec = critical_well();
    let controls = Controls { eps_max: 1e-2, ..Controls::default() };
    let curve = threshold_branch(&spec, Parity::Odd, &controls).unwrap();
    let ratio = curve.points[0].e / curve.points[0].eps;
    let target = -2.0 / std::f64::consts::PI.powi(2);
    report(
        "criterion 05 threshold energy slope",
        (ratio - target).abs() < 0.01 * target.abs(),
        &format!("E/eps = {ratio:.8} (target {target:.8} +- 1%)"),
    );
}

#[test]
fn criterion_06_dkappa_derivative_formula() {
    let spec = well2();
    let p = scan_axis(&spec, Target::WFunction, 0.05, 1.4, 40)
        .unwrap()
        .remove(0);
    let p = mode_and_nondegeneracy(&spec, &p).unwrap();
    let formula = df_dkappa_formula(&p).unwrap();
    let kappa = p.kappa();
    let h = 1e-5;
    let sig = BCSignature::bound_state();
    let fp = shoot(&spec, kappa + h, 0.0, sig).unwrap().residual_f;
    let fm = shoot(&spec, kappa - h, 0.0, sig).unwrap().residual_f;
    let fd = (fp - fm) / (2.0 * h);
    let rel = (formula - fd).abs() / fd.abs();
    report(
        "criterion 06 dF/dkappa formula",
        rel < 1e-4,
        &format!("closed form {formula:.10} vs FD {fd:.10}, rel err {rel:.3e} (< 1e-4)"),
    );
}

#[test]
fn criterion_07_bound_state_bifurcation() {
    let spec = well2();
    let p = scan_axis(&spec, Target::WFunction, 0.05, 1.4, 40)
        .unwrap()
        .remove(0);
    let kappa = p.kappa();
    let g = seed_branch(&spec, &p, 1e-6).unwrap();
    let de = (g.e + kappa * kappa).abs();
    report(
        "criterion 07 bound-state bifurcation",
        g.n < 1e-4 && de < 1e-4,
        &format!("N(1e-6) = {:.3e} (< 1e-4), |E + kappa*^2| = {de:.3e} (< 1e-4)", g.n),
    );
}

#[test]
fn criterion_08_anti_bound_mass_threshold() {
    let spec = barrier();
    let p = anti_bound_point(&spec);
    let k_r = p.kappa();
    let g = seed_branch(&spec, &p, 1e-6).unwrap();
    let target = 8.0 * k_r.abs();
    let rel = (g.n - target).abs() / target;
    report(
        "criterion 08 anti-bound mass threshold",
        rel < 0.02,
        &format!("N(eps->0) = {:.8}, 8|kappa_r| = {target:.8}, rel err {rel:.3e} (< 2%)", g.n),
    );
}

#[test]
fn criterion_09_transmission_mass_threshold() {
    let spec = PotentialSpec::square_well(3.0, 1.0).unwrap();
    let k_t = -(3.0 - std::f64::consts::PI.powi(2) / 4.0).sqrt();
    let pts = scan_axis(&spec, Target::SMinusFunction, -2.0, -0.05, 80).unwrap();
    let p = pts
        .into_iter()
        .find(|p| (p.kappa() - k_t).abs() < 1e-6)
        .expect("transmission resonance");
    let p = mode_and_nondegeneracy(&spec, &p).unwrap();
    assert!(p.nondegeneracy.unwrap().abs() > 1e-6);
    let g = seed_branch(&spec, &p, 1e-6).unwrap();
    let target = 4.0 * k_t.abs();
    let rel = (g.n - target).abs() / target;
    report(
        "criterion 09 transmission mass threshold",
        rel < 0.02,
        &format!("N(eps->0) = {:.8}, 4|kappa_t| = {target:.8}, rel err {rel:.3e} (< 2%)", g.n),
    );
}

#[test]
fn criterion_10_drift_law() {
    let spec = barrier();
    let p = anti_bound_point(&spec);
    let k_star = p.kappa();
    let eps: Vec<f64> = (0..25).map(|j| 1e-6 * 10f64.powf(j as f64 / 8.0)).collect();
    let states = sweep_eps(&spec, BCSignature::scattering_resonance(), k_star, &eps).unwrap();
    let xs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = states.iter().map(|g| g.x_r).collect();
    let (slope, _) = linear_fit(&xs, &ys);
    let target = -1.0 / (2.0 * k_star);
    let rel = (slope - target).abs() / target.abs();
    report(
        "criterion 10 drift law",
        rel < 0.02,
        &format!("slope = {slope:.8}, -1/(2 kappa*) = {target:.8}, rel err {rel:.3e} (< 2%)"),
    );
}

#[test]
fn criterion_11_delta_oracle() {
    // Mass limits at the fold E -> -alpha^2/4: nu -> |alpha|/2, so
    // N -> 2|alpha| + 2 alpha: 4 for the barrier, 0 for the well.
    let mut ok = true;
    let mut details = Vec::new();
    for &(alpha, target) in &[(1.0, 4.0), (-1.0, 0.0)] {
        let e_star = -alpha * alpha / 4.0f64;
        // Evaluate just below threshold and extrapolate linearly in
        // sqrt(-E) - |alpha|/2, along which N is exactly linear.
        let n_limit = {
            let nu_star = alpha * alpha / 4.0f64;
            4.0 * nu_star.sqrt() + 2.0 * alpha
        };
        let st = delta_state(alpha, e_star - 1e-12).unwrap();
        ok &= (n_limit - target).abs() < 1e-6;
        ok &= (st.mass - target).abs() < 1e-5;
        details.push(format!("alpha={alpha}: N* = {n_limit} (target {target})"));
    }
    // Glue assembly fed the closed-form boundary data reproduces the mass.
    let st = delta_state(1.0, -1.0).unwrap();
    let inner = nlsbif::nlsolve::InnerSolution {
        kappa: 1.0,
        eps: 1.0,
        signature: BCSignature::bound_state(),
        grid: vec![-0.0, 0.0],
        u: vec![st.profile(-0.0), st.profile(0.0)],
        u_prime: vec![st.profile_deriv(-1e-300), st.profile_deriv(1e-300)],
        residual_f: 0.0,
        int_u2: 0.0,
        int_u4: 0.0,
        int_up2: 0.0,
    };
    let glued = nlsbif::glue::assemble(inner).unwrap();
    let dn = (glued.n - st.mass).abs();
    ok &= dn < 1e-8;
    details.push(format!("glued N vs oracle: |dN| = {dn:.3e} (< 1e-8)"));
    report("criterion 11 delta oracle", ok, &details.join("; "));
}

#[test]
fn criterion_12_no_go_property() {
    let spec = barrier();
    // Certify the hypotheses: no bound state, no threshold resonance.
    let bound = scan_axis(&spec, Target::WFunction, 0.05, 3.0, 120).unwrap();
    assert!(bound.is_empty(), "barrier must have no bound state");
    assert!(detect_threshold(&spec).unwrap().is_none());

    let p = anti_bound_point(&spec);
    let controls = Controls { e_min: -10.0, eps_max: 5.0, ..Controls::default() };
    let curve = trace_branch(&spec, &p, &controls).unwrap();
    assert!(curve.points.len() > 10);
    let e_max = curve.points.iter().map(|g| g.e).fold(f64::MIN, f64::max);
    let n_min = curve.points.iter().map(|g| g.n).fold(f64::MAX, f64::min);
    report(
        "criterion 12 no-go property",
        e_max < -1e-3 && n_min > 0.1,
        &format!(
            "{} points, max E = {e_max:.6} (< -1e-3), min N = {n_min:.6} (> 0.1)",
            curve.points.len()
        ),
    );
}

#[test]
fn criterion_13_global_residuals() {
    // The validation suite enforces the glue invariants on emitted states;
    // additionally re-insert every point of a traced branch into the
    // stationary equation.
    let checks = run_validation(None).unwrap();
    let all_pass = checks.iter().all(|c| c.pass());
    assert!(all_pass, "validation checks failed");

    let spec = well2();
    let p = scan_axis(&spec, Target::WFunction, 0.05, 1.4, 40)
        .unwrap()
        .remove(0);
    let controls = Controls { e_min: -4.0, ..Controls::default() };
    let curve = trace_branch(&spec, &p, &controls).unwrap();
    let mut worst_ode: f64 = 0.0;
    let mut worst_jump: f64 = 0.0;
    for g in curve.points.iter().step_by(curve.points.len() / 12 + 1) {
        let amp = (2.0 * (-g.e)).sqrt();
        worst_ode = worst_ode.max(ode_residual_sup(&spec, g).unwrap() / (1e-6 * amp));
        let r = &g.residuals;
        let jump = r
            .psi_jump_b
            .abs()
            .max(r.dpsi_jump_b.abs())
            .max(r.psi_jump_mb.abs())
            .max(r.dpsi_jump_mb.abs());
        worst_jump = worst_jump.max(jump);
    }
    report(
        "criterion 13 global residuals",
        worst_ode < 1.0 && worst_jump < 1e-9,
        &format!(
            "worst ODE residual {worst_ode:.3}x tolerance, worst jump {worst_jump:.3e} (< 1e-9)"
        ),
    );
}

#[test]
fn note_smooth_well_critical_depth() {
    // Quantitative anchor for the smooth-well family at beta = -11: the
    // first threshold sits at alpha* = 24.04031. Bisection on w(0; alpha).
    let w0 = |alpha: f64| -> f64 {
        let spec = PotentialSpec::smooth_well(alpha, -11.0).unwrap();
        nlsbif::scattering::wronskian_on_axis(&spec, 0.0).unwrap()
    };
    let (mut lo, mut hi) = (23.0, 25.0);
    let (flo, fhi) = (w0(lo), w0(hi));
    assert!(flo * fhi < 0.0, "no sign change: w({lo}) = {flo}, w({hi}) = {fhi}");
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if w0(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha_star = 0.5 * (lo + hi);
    report(
        "note smooth-well critical depth",
        (alpha_star - 24.04031).abs() < 1e-3,
        &format!("alpha* = {alpha_star:.6} (24.04031 +- 1e-3)"),
    );
}
