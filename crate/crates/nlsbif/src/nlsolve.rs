//! Inner nonlinear boundary-value problem on [-b, b]: shooting with
//! nonlinear radiation boundary conditions, Newton in kappa for the
//! generic problem, and Newton in E for the symmetric threshold problem.
//!
//! All unknowns are scaled: the physical profile is psi = sqrt(eps) * u,
//! so the amplitude lives in eps and u is normalized by its left boundary
//! value.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, OdeSolution};
use crate::potential::PotentialSpec;
use crate::scattering::{JOST_ATOL, JOST_RTOL};
use crate::spectrum::{Parity, SpectralClass, SpectralPoint};

/// Signs of the radiation boundary conditions at the two endpoints.
///
/// The left condition `U'(-b) = sigma_l * U(-b) * sqrt(kappa^2 - eps/2 U^2)`
/// is imposed exactly; the right one defines the shooting residual
/// `F = U'(b) - sigma_r * U(b) * sqrt(kappa^2 - eps/2 U(b)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BCSignature {
    pub sigma_l: f64,
    pub sigma_r: f64,
}

impl BCSignature {
    /// Decaying on both sides: bound-state problem, kappa > 0.
    pub fn bound_state() -> Self {
        BCSignature { sigma_l: 1.0, sigma_r: -1.0 }
    }

    /// Growing on both sides: scattering-resonance problem, kappa < 0.
    pub fn scattering_resonance() -> Self {
        BCSignature { sigma_l: -1.0, sigma_r: 1.0 }
    }

    /// Decay toward +inf and growth toward -inf (kappa > 0) or the
    /// mirror image (kappa < 0).
    pub fn transmission(kappa: f64) -> Self {
        if kappa > 0.0 {
            BCSignature { sigma_l: -1.0, sigma_r: -1.0 }
        } else {
            BCSignature { sigma_l: 1.0, sigma_r: 1.0 }
        }
    }

    pub fn for_class(class: SpectralClass, kappa: f64) -> Result<Self> {
        match class {
            SpectralClass::BoundStatePole => Ok(Self::bound_state()),
            SpectralClass::AntiBoundState => Ok(Self::scattering_resonance()),
            SpectralClass::TransmissionResonance => Ok(Self::transmission(kappa)),
            _ => Err(Error::WrongKind),
        }
    }
}

/// Converged (or candidate) solution of the inner problem, normalized to
/// `u(-b) = 1` in the generic mode and `max` IC value 1 in threshold mode.
#[derive(Debug, Clone, Serialize)]
pub struct InnerSolution {
    pub kappa: f64,
    pub eps: f64,
    pub signature: BCSignature,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub residual_f: f64,
    pub int_u2: f64,
    pub int_u4: f64,
    pub int_up2: f64,
}

impl InnerSolution {
    pub fn energy(&self) -> f64 {
        -self.kappa * self.kappa
    }

    pub fn u_at_minus_b(&self) -> f64 {
        self.u[0]
    }

    pub fn u_at_plus_b(&self) -> f64 {
        *self.u.last().unwrap()
    }

    pub fn u_prime_at_minus_b(&self) -> f64 {
        self.u_prime[0]
    }

    pub fn u_prime_at_plus_b(&self) -> f64 {
        *self.u_prime.last().unwrap()
    }
}

/// State layout for the generic shoot: U, U', and the kappa- and
/// eps-variations with their derivatives, plus running integrals.
const I_U: usize = 0;
const I_UP: usize = 1;
const I_W: usize = 2;
const I_WP: usize = 3;
const I_Z: usize = 4;
const I_ZP: usize = 5;
const I_U2: usize = 6;
const I_U4: usize = 7;
const I_UP2: usize = 8;

fn shoot_raw(
    spec: &PotentialSpec,
    kappa: f64,
    eps: f64,
    sig: BCSignature,
) -> Result<OdeSolution> {
    let b = spec.half_width_b;
    let root2 = kappa * kappa - 0.5 * eps;
    if root2 <= 0.0 {
        return Err(Error::BcOutOfRange);
    }
    let r = root2.sqrt();
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut y0 = [Complex64::default(); 9];
    y0[I_U] = c(1.0);
    y0[I_UP] = c(sig.sigma_l * r);
    // d/dkappa and d/deps of the left BC with U(-b) = 1 fixed.
    y0[I_WP] = c(sig.sigma_l * kappa / r);
    y0[I_ZP] = c(-sig.sigma_l / (4.0 * r));
    let mut eval_err = None;
    let sol = integrate(
        |x, y, dy| {
            let v = spec.evaluate(x).unwrap_or_else(|e| {
                eval_err = Some(e);
                0.0
            });
            let u = y[I_U];
            let lin = v + kappa * kappa;
            let cubic = 3.0 * eps * u * u;
            dy[I_U] = y[I_UP];
            dy[I_UP] = lin * u - eps * u * u * u;
            dy[I_W] = y[I_WP];
            dy[I_WP] = (lin - cubic) * y[I_W] + 2.0 * kappa * u;
            dy[I_Z] = y[I_ZP];
            dy[I_ZP] = (lin - cubic) * y[I_Z] - u * u * u;
            dy[I_U2] = u * u;
            dy[I_U4] = u * u * u * u;
            dy[I_UP2] = y[I_UP] * y[I_UP];
        },
        -b,
        b,
        &y0,
        &spec.interior_breakpoints(),
        &OdeOptions {
            rtol: JOST_RTOL,
            atol: JOST_ATOL,
            record: true,
            ..OdeOptions::default()
        },
    )?;
    if let Some(e) = eval_err {
        return Err(e);
    }
    Ok(sol)
}

/// Shoot and return the solution together with the residual derivatives
/// dF/dkappa and dF/deps from the variational equations.
pub fn shoot_with_derivs(
    spec: &PotentialSpec,
    kappa: f64,
    eps: f64,
    sig: BCSignature,
) -> Result<(InnerSolution, f64, f64)> {
    let sol = shoot_raw(spec, kappa, eps, sig)?;
    let yb = &sol.y_end;
    let (u, up) = (yb[I_U].re, yb[I_UP].re);
    let (w, wp) = (yb[I_W].re, yb[I_WP].re);
    let (z, zp) = (yb[I_Z].re, yb[I_ZP].re);
    let q2 = kappa * kappa - 0.5 * eps * u * u;
    if q2 <= 0.0 {
        return Err(Error::BcOutOfRange);
    }
    let q = q2.sqrt();
    let f = up - sig.sigma_r * u * q;
    let dq_dkappa = (2.0 * kappa - eps * u * w) / (2.0 * q);
    let dq_deps = (-0.5 * u * u - eps * u * z) / (2.0 * q);
    let f_kappa = wp - sig.sigma_r * (w * q + u * dq_dkappa);
    let f_eps = zp - sig.sigma_r * (z * q + u * dq_deps);

    let grid: Vec<f64> = sol.xs.clone();
    let u_vals: Vec<f64> = sol.ys.iter().map(|y| y[I_U].re).collect();
    let up_vals: Vec<f64> = sol.ys.iter().map(|y| y[I_UP].re).collect();
    let inner = InnerSolution {
        kappa,
        eps,
        signature: sig,
        grid,
        u: u_vals,
        u_prime: up_vals,
        residual_f: f,
        int_u2: yb[I_U2].re,
        int_u4: yb[I_U4].re,
        int_up2: yb[I_UP2].re,
    };
    Ok((inner, f_kappa, f_eps))
}

pub fn shoot(
    spec: &PotentialSpec,
    kappa: f64,
    eps: f64,
    sig: BCSignature,
) -> Result<InnerSolution> {
    Ok(shoot_with_derivs(spec, kappa, eps, sig)?.0)
}

fn residual_tol(sol: &InnerSolution) -> f64 {
    1e-10 * (1.0 + sol.u_at_plus_b().abs() * sol.kappa.abs())
}

/// Newton in kappa on the shooting residual at fixed eps. The derivative
/// comes from the variational ODE; steps that leave the admissible region
/// (square roots turning complex) are halved, up to 30 times.
pub fn solve_kappa(
    spec: &PotentialSpec,
    eps: f64,
    sig: BCSignature,
    kappa_guess: f64,
) -> Result<InnerSolution> {
    let (mut sol, mut f_kappa, _) = shoot_with_derivs(spec, kappa_guess, eps, sig)?;
    if f_kappa.abs() <= 1e-8 {
        return Err(Error::Degenerate);
    }
    let mut kappa = kappa_guess;
    for _ in 0..50 {
        if sol.residual_f.abs() < residual_tol(&sol) {
            return Ok(sol);
        }
        if !f_kappa.is_finite() || f_kappa.abs() < 1e-14 {
            return Err(Error::Degenerate);
        }
        let step = sol.residual_f / f_kappa;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            match shoot_with_derivs(spec, kappa - lambda * step, eps, sig) {
                Ok(next) => {
                    accepted = Some((kappa - lambda * step, next));
                    break;
                }
                Err(Error::BcOutOfRange) => lambda *= 0.5,
                Err(e) => return Err(e),
            }
        }
        match accepted {
            Some((k_new, (s, fk, _))) => {
                kappa = k_new;
                sol = s;
                f_kappa = fk;
            }
            None => return Err(Error::NewtonDiverged),
        }
    }
    if sol.residual_f.abs() < residual_tol(&sol) {
        Ok(sol)
    } else {
        Err(Error::NewtonDiverged)
    }
}

/// Closed-form dF/dkappa at (kappa_star, 0) from the linear mode trace:
/// `(2 kappa int U^2 + U(-b)^2 + U(b)^2) / U(b)` for zeros of w, with the
/// sign of the `U(-b)^2` term flipped for transmission zeros.
pub fn df_dkappa_formula(point: &SpectralPoint) -> Result<f64> {
    let trace = point.mode_trace.ok_or(Error::NotOnAxis)?;
    let kappa = point.k_star.im;
    let u_m = trace.u_at_minus_b;
    let u_p = trace.u_at_plus_b;
    let numerator = match point.class {
        SpectralClass::BoundStatePole | SpectralClass::AntiBoundState => {
            2.0 * kappa * trace.int_u2 + u_m * u_m + u_p * u_p
        }
        SpectralClass::TransmissionResonance => {
            2.0 * kappa * trace.int_u2 - u_m * u_m + u_p * u_p
        }
        _ => return Err(Error::NotOnAxis),
    };
    Ok(numerator / u_p)
}

/// Threshold shoot on [0, b]: returns boundary data (U, U', W, W') at b
/// where W is the E-variation.
fn threshold_shoot(
    spec: &PotentialSpec,
    e: f64,
    eps: f64,
    parity: Parity,
    record: bool,
) -> Result<OdeSolution> {
    let b = spec.half_width_b;
    let c = |v: f64| Complex64::new(v, 0.0);
    // Even modes have a flat center, odd modes a node with unit slope.
    let mut y0 = [Complex64::default(); 7];
    match parity {
        Parity::Even => y0[0] = c(1.0),
        Parity::Odd => y0[1] = c(1.0),
        Parity::None => return Err(Error::NotSymmetric),
    }
    let mut eval_err = None;
    let sol = integrate(
        |x, y, dy| {
            let v = spec.evaluate(x).unwrap_or_else(|er| {
                eval_err = Some(er);
                0.0
            });
            let u = y[0];
            dy[0] = y[1];
            dy[1] = (v - e) * u - eps * u * u * u;
            dy[2] = y[3];
            dy[3] = (v - e) * y[2] - u - 3.0 * eps * u * u * y[2];
            dy[4] = u * u;
            dy[5] = u * u * u * u;
            dy[6] = y[1] * y[1];
        },
        0.0,
        b,
        &y0,
        &spec.interior_breakpoints(),
        &OdeOptions {
            rtol: JOST_RTOL,
            atol: JOST_ATOL,
            record,
            ..OdeOptions::default()
        },
    )?;
    if let Some(er) = eval_err {
        return Err(er);
    }
    Ok(sol)
}

/// The threshold matching functional `F(E, eps) = U'(b)^2 + E U(b)^2 +
/// (eps/2) U(b)^4` and its E-derivative; `F = 0` is the flux identity
/// that lets a soliton tail attach at x = b.
fn threshold_f(e: f64, eps: f64, yb: &[Complex64]) -> (f64, f64) {
    let (u, up, w, wp) = (yb[0].re, yb[1].re, yb[2].re, yb[3].re);
    let f = up * up + e * u * u + 0.5 * eps * u.powi(4);
    let f_e = 2.0 * up * wp + u * u + 2.0 * e * u * w + 2.0 * eps * u.powi(3) * w;
    (f, f_e)
}

/// Solve the symmetric threshold problem: Newton on E at fixed eps > 0,
/// then extend the half-line solution to [-b, b] by parity.
pub fn solve_threshold_symmetric(
    spec: &PotentialSpec,
    eps: f64,
    parity: Parity,
    e_guess: f64,
) -> Result<InnerSolution> {
    if !spec.is_even(1e-10) {
        return Err(Error::NotSymmetric);
    }
    if eps <= 0.0 || e_guess >= 0.0 {
        return Err(Error::Config(
            "threshold solve needs eps > 0 and E_guess < 0".into(),
        ));
    }
    let mut e = e_guess;
    let mut converged = false;
    for _ in 0..60 {
        let sol = threshold_shoot(spec, e, eps, parity, false)?;
        let (f, f_e) = threshold_f(e, eps, &sol.y_end);
        if f.abs() < 1e-12 {
            converged = true;
            break;
        }
        if !f_e.is_finite() || f_e.abs() < 1e-14 {
            return Err(Error::Degenerate);
        }
        let mut step = f / f_e;
        // E must stay strictly negative.
        let mut halved = 0;
        while e - step >= 0.0 && halved < 60 {
            step *= 0.5;
            halved += 1;
        }
        if halved == 60 {
            return Err(Error::NewtonDiverged);
        }
        e -= step;
        if step.abs() < 1e-16 * (1.0 + e.abs()) {
            let sol = threshold_shoot(spec, e, eps, parity, false)?;
            converged = threshold_f(e, eps, &sol.y_end).0.abs() < 1e-12;
            break;
        }
    }
    if !converged {
        return Err(Error::NewtonDiverged);
    }

    let half = threshold_shoot(spec, e, eps, parity, true)?;
    let n = half.xs.len();
    let mut grid = Vec::with_capacity(2 * n - 1);
    let mut u = Vec::with_capacity(2 * n - 1);
    let mut up = Vec::with_capacity(2 * n - 1);
    let (us, ups): (Vec<f64>, Vec<f64>) = half
        .ys
        .iter()
        .map(|y| (y[0].re, y[1].re))
        .unzip();
    let sgn = if parity == Parity::Even { 1.0 } else { -1.0 };
    for i in (1..n).rev() {
        grid.push(-half.xs[i]);
        u.push(sgn * us[i]);
        up.push(-sgn * ups[i]);
    }
    for i in 0..n {
        grid.push(half.xs[i]);
        u.push(us[i]);
        up.push(ups[i]);
    }

    let kappa = (-e).sqrt();
    let u_b = us[n - 1];
    let up_b = ups[n - 1];
    let q2 = kappa * kappa - 0.5 * eps * u_b * u_b;
    if q2 <= 0.0 {
        return Err(Error::BcOutOfRange);
    }
    let sigma_r = (up_b / (u_b * q2.sqrt())).signum();
    let (f_final, _) = threshold_f(e, eps, &half.y_end);
    Ok(InnerSolution {
        kappa,
        eps,
        signature: BCSignature { sigma_l: -sigma_r, sigma_r },
        grid,
        u,
        u_prime: up,
        residual_f: f_final,
        // Integrals over the half line doubled; U^2, U^4, U'^2 are all even.
        int_u2: 2.0 * half.y_end[4].re,
        int_u4: 2.0 * half.y_end[5].re,
        int_up2: 2.0 * half.y_end[6].re,
    })
}
