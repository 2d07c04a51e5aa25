//! Curves of full-line nonlinear bound states: seeding at spectral points,
//! pseudo-arclength continuation in the (kappa, eps) plane, the symmetric
//! threshold sweep, and the coalescence scan over potential families.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::glue::{assemble, GluedState};
use crate::nlsolve::{shoot_with_derivs, solve_kappa, solve_threshold_symmetric, BCSignature};
use crate::potential::PotentialSpec;
use crate::spectrum::{
    count_zeros_box, detect_threshold, mode_and_nondegeneracy, scan_axis, Parity, Rect,
    SpectralPoint, Target,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    ReachedEpsMax,
    ReachedEMin,
    ReachedMaxPoints,
    NewtonFailed,
    BcOutOfRange,
    Degenerate,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Controls {
    /// Initial arclength step in the (kappa, eps) plane.
    pub ds0: f64,
    pub ds_max: f64,
    pub e_min: f64,
    pub eps_max: f64,
    pub max_points: usize,
    /// eps of the first point on a seeded branch.
    pub eps_seed: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            ds0: 1e-3,
            ds_max: 0.25,
            e_min: -25.0,
            eps_max: 10.0,
            max_points: 2000,
            eps_seed: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ArclengthStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchCurve {
    pub seed: SpectralPoint,
    pub points: Vec<GluedState>,
    pub termination: Termination,
    pub arclength_steps: ArclengthStats,
}

/// First point of a branch: solve the inner problem at a small eps from
/// the linear zero and glue. Degenerate or multiple zeros are refused.
pub fn seed_branch(spec: &PotentialSpec, point: &SpectralPoint, eps0: f64) -> Result<GluedState> {
    let enriched;
    let point = if point.mode_trace.is_some() {
        point
    } else {
        enriched = mode_and_nondegeneracy(spec, point)?;
        &enriched
    };
    if point.possibly_multiple || point.nondegeneracy.unwrap_or(0.0).abs() < 1e-6 {
        return Err(Error::Degenerate);
    }
    let kappa = point.k_star.im;
    let sig = BCSignature::for_class(point.class, kappa)?;
    let sol = solve_kappa(spec, eps0, sig, kappa)?;
    assemble(sol)
}

/// One Newton correction of the bordered system
/// `F(kappa, eps) = 0, tangent . (x - x_pred) = 0`.
fn correct(
    spec: &PotentialSpec,
    sig: BCSignature,
    pred: (f64, f64),
    tangent: (f64, f64),
) -> Result<(f64, f64, crate::nlsolve::InnerSolution, usize)> {
    let (mut kappa, mut eps) = pred;
    for it in 0..12 {
        if eps <= 0.0 {
            return Err(Error::BcOutOfRange);
        }
        let (sol, f_k, f_e) = shoot_with_derivs(spec, kappa, eps, sig)?;
        let f = sol.residual_f;
        let g = tangent.0 * (kappa - pred.0) + tangent.1 * (eps - pred.1);
        let tol = 1e-10 * (1.0 + sol.u_at_plus_b().abs() * kappa.abs());
        if f.abs() < tol && g.abs() < 1e-12 * (1.0 + kappa.abs() + eps) {
            return Ok((kappa, eps, sol, it));
        }
        let det = f_k * tangent.1 - f_e * tangent.0;
        if !det.is_finite() || det.abs() < 1e-14 {
            return Err(Error::Degenerate);
        }
        let dk = (f * tangent.1 - f_e * g) / det;
        let de = (f_k * g - f * tangent.0) / det;
        kappa -= dk;
        eps -= de;
    }
    Err(Error::NewtonDiverged)
}

/// Pseudo-arclength continuation starting from a converged glued state.
/// The step doubles after three easy corrections and halves on failure;
/// every accepted point is glued and appended.
pub fn continue_branch(
    spec: &PotentialSpec,
    seed: SpectralPoint,
    start: GluedState,
    controls: &Controls,
) -> BranchCurve {
    let sig = start.inner.signature;
    let mut stats = ArclengthStats::default();
    let mut points = vec![start];
    let mut ds = controls.ds0;
    let mut easy_streak = 0;

    // Initial tangent from the implicit function theorem, oriented toward
    // increasing eps.
    let (k0, e0) = {
        let p = &points[0].inner;
        (p.kappa, p.eps)
    };
    let mut tangent = match shoot_with_derivs(spec, k0, e0, sig) {
        Ok((_, f_k, f_e)) => {
            let t = (-f_e / f_k, 1.0);
            let n = (t.0 * t.0 + t.1 * t.1).sqrt();
            (t.0 / n, t.1 / n)
        }
        Err(_) => (0.0, 1.0),
    };

    let termination = loop {
        if points.len() >= controls.max_points {
            break Termination::ReachedMaxPoints;
        }
        let last = &points.last().unwrap().inner;
        let (k_last, e_last) = (last.kappa, last.eps);
        if e_last >= controls.eps_max {
            break Termination::ReachedEpsMax;
        }
        if -k_last * k_last <= controls.e_min {
            break Termination::ReachedEMin;
        }
        if ds < 1e-10 {
            break Termination::NewtonFailed;
        }

        let pred = (k_last + ds * tangent.0, e_last + ds * tangent.1);
        match correct(spec, sig, pred, tangent) {
            Ok((kappa, eps, sol, iters)) => match assemble(sol) {
                Ok(glued) => {
                    stats.accepted += 1;
                    let prev = (k_last, e_last);
                    points.push(glued);
                    // Secant tangent for the next prediction.
                    let t = (kappa - prev.0, eps - prev.1);
                    let n = (t.0 * t.0 + t.1 * t.1).sqrt();
                    if n > 0.0 {
                        tangent = (t.0 / n, t.1 / n);
                    }
                    if iters <= 4 {
                        easy_streak += 1;
                        if easy_streak >= 3 {
                            ds = (2.0 * ds).min(controls.ds_max);
                            easy_streak = 0;
                        }
                    } else {
                        easy_streak = 0;
                    }
                }
                Err(_) => {
                    stats.rejected += 1;
                    easy_streak = 0;
                    ds *= 0.5;
                }
            },
            Err(Error::BcOutOfRange) => {
                stats.rejected += 1;
                easy_streak = 0;
                ds *= 0.5;
                if ds < 1e-10 {
                    break Termination::BcOutOfRange;
                }
            }
            Err(Error::Degenerate) => break Termination::Degenerate,
            Err(_) => {
                stats.rejected += 1;
                easy_streak = 0;
                ds *= 0.5;
            }
        }
    };

    BranchCurve {
        seed,
        points,
        termination,
        arclength_steps: stats,
    }
}

/// Seed at `controls.eps_seed` and trace.
pub fn trace_branch(
    spec: &PotentialSpec,
    point: &SpectralPoint,
    controls: &Controls,
) -> Result<BranchCurve> {
    let start = seed_branch(spec, point, controls.eps_seed)?;
    Ok(continue_branch(spec, point.clone(), start, controls))
}

/// Solve along a fixed ladder of eps values with warm starts. This keeps
/// log-spaced small-eps data that the asymptotic laws are read from.
pub fn sweep_eps(
    spec: &PotentialSpec,
    sig: BCSignature,
    kappa0: f64,
    eps_values: &[f64],
) -> Result<Vec<GluedState>> {
    let mut kappa = kappa0;
    let mut out = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let sol = solve_kappa(spec, eps, sig, kappa)?;
        kappa = sol.kappa;
        out.push(assemble(sol)?);
    }
    Ok(out)
}

/// Symmetric threshold branch: sweep eps geometrically upward from
/// `controls.eps_seed`, Newton in E with warm starts, glue each point.
pub fn threshold_branch(
    spec: &PotentialSpec,
    parity: Parity,
    controls: &Controls,
) -> Result<BranchCurve> {
    let seed = detect_threshold(spec)?.ok_or(Error::NoThreshold)?;
    let per_decade = 12.0;
    let ratio = 10f64.powf(1.0 / per_decade);
    let mut eps = controls.eps_seed;
    let mut e_guess = -0.5 * eps;
    let mut points = Vec::new();
    let mut termination = Termination::ReachedEpsMax;
    while eps <= controls.eps_max * (1.0 + 1e-12) {
        let sol = match solve_threshold_symmetric(spec, eps, parity, e_guess) {
            Ok(s) => s,
            Err(Error::NotSymmetric) => return Err(Error::NotSymmetric),
            Err(_) => {
                termination = Termination::NewtonFailed;
                break;
            }
        };
        let e = sol.energy();
        if e <= controls.e_min {
            termination = Termination::ReachedEMin;
            break;
        }
        match assemble(sol) {
            Ok(g) => points.push(g),
            Err(_) => {
                termination = Termination::NewtonFailed;
                break;
            }
        }
        if points.len() >= controls.max_points {
            termination = Termination::ReachedMaxPoints;
            break;
        }
        e_guess = e * ratio;
        eps *= ratio;
    }
    Ok(BranchCurve {
        seed,
        points,
        termination,
        arclength_steps: ArclengthStats::default(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoalescenceSample {
    pub alpha: f64,
    pub axis_zeros: Vec<f64>,
    pub box_count: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoalescenceReport {
    pub samples: Vec<CoalescenceSample>,
    /// Consecutive alpha pair across which the number of axis zeros drops
    /// by two while the box count is conserved.
    pub bracket: Option<(f64, f64)>,
}

/// Track axis zeros of `target` across a family of potentials and find
/// where a pair merges and departs from the imaginary axis.
pub fn coalescence_scan<F>(
    family: F,
    alphas: &[f64],
    target: Target,
    kappa_window: (f64, f64),
    rect: Rect,
) -> Result<CoalescenceReport>
where
    F: Fn(f64) -> Result<PotentialSpec> + Sync,
{
    let samples: Vec<CoalescenceSample> = alphas
        .par_iter()
        .map(|&alpha| {
            let spec = family(alpha)?;
            let pts = scan_axis(&spec, target, kappa_window.0, kappa_window.1, 300)?;
            let box_count = count_zeros_box(&spec, target, rect)?;
            Ok(CoalescenceSample {
                alpha,
                axis_zeros: pts.iter().map(|p| p.kappa()).collect(),
                box_count,
            })
        })
        .collect::<Result<_>>()?;
    let mut bracket = None;
    for w in samples.windows(2) {
        let diff = w[0].axis_zeros.len() as i64 - w[1].axis_zeros.len() as i64;
        if diff.abs() == 2 && w[0].box_count == w[1].box_count {
            let (lo, hi) = (w[0].alpha, w[1].alpha);
            bracket = Some(if lo < hi { (lo, hi) } else { (hi, lo) });
            break;
        }
    }
    Ok(CoalescenceReport { samples, bracket })
}

/// Least-squares slope and intercept of y against x.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
