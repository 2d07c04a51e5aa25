//! Jost solutions and scattering data of `H_V = -d^2/dx^2 + V` for
//! complex wavenumber `k`.
//!
//! The Jost ODEs are integrated in the rescaled form `m_pm = f_pm e^{-/+ikx}`,
//! which removes the free exponential entirely; this keeps full accuracy on
//! and far from the real axis (deep bound and anti-bound states) at no cost
//! for small `k`. The derivative with respect to `k`, needed by root
//! polishing and contour quadrature, is propagated through the variational
//! ODE alongside the solution.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions};
use crate::potential::PotentialSpec;

pub const JOST_RTOL: f64 = 1e-11;
pub const JOST_ATOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

/// Jost solution value `(f, f')` at a point, together with its
/// `k`-derivative.
#[derive(Debug, Clone, Copy)]
pub struct JostValue {
    pub f: Complex64,
    pub f_prime: Complex64,
    pub df_dk: Complex64,
    pub dfp_dk: Complex64,
    pub side: Side,
    pub x: f64,
}

fn ode_opts() -> OdeOptions {
    OdeOptions {
        rtol: JOST_RTOL,
        atol: JOST_ATOL,
        ..OdeOptions::default()
    }
}

/// Integrate the rescaled Jost system with its variational equation from
/// the free boundary to `x_eval`, returning `[m, m', dm/dk, dm'/dk]`.
fn jost_m(spec: &PotentialSpec, k: Complex64, side: Side, x_eval: f64) -> Result<[Complex64; 4]> {
    let b = spec.half_width_b;
    let x_start = match side {
        Side::Plus => b,
        Side::Minus => -b,
    };
    // m'' = V m -/+ 2ik m' (Plus: -, Minus: +), and the k-derivative
    // p'' = V p -/+ 2ik p' -/+ 2i m'.
    let sign = match side {
        Side::Plus => -1.0,
        Side::Minus => 1.0,
    };
    let two_i = Complex64::new(0.0, 2.0);
    let y0 = [
        Complex64::new(1.0, 0.0),
        Complex64::default(),
        Complex64::default(),
        Complex64::default(),
    ];
    if x_eval == x_start {
        return Ok(y0);
    }
    let breaks = spec.interior_breakpoints();
    let mut eval_err: Option<Error> = None;
    let sol = integrate(
        |x, y, dy| {
            let v = match spec.evaluate(x) {
                Ok(v) => v,
                Err(e) => {
                    eval_err = Some(e);
                    0.0
                }
            };
            dy[0] = y[1];
            dy[1] = v * y[0] + sign * two_i * k * y[1];
            dy[2] = y[3];
            dy[3] = v * y[2] + sign * two_i * k * y[3] + sign * two_i * y[1];
        },
        x_start,
        x_eval,
        &y0,
        &breaks,
        &ode_opts(),
    )?;
    if let Some(e) = eval_err {
        return Err(e);
    }
    Ok([sol.y_end[0], sol.y_end[1], sol.y_end[2], sol.y_end[3]])
}

fn to_jost(side: Side, k: Complex64, x: f64, m: [Complex64; 4]) -> JostValue {
    let i = Complex64::new(0.0, 1.0);
    let [mm, mp, pm, pp] = m;
    match side {
        Side::Plus => {
            // f = m e^{ikx}
            let ph = (i * k * x).exp();
            JostValue {
                f: mm * ph,
                f_prime: (mp + i * k * mm) * ph,
                df_dk: (pm + i * x * mm) * ph,
                dfp_dk: (pp + i * mm + i * k * pm + i * x * (mp + i * k * mm)) * ph,
                side,
                x,
            }
        }
        Side::Minus => {
            // f = m e^{-ikx}
            let ph = (-i * k * x).exp();
            JostValue {
                f: mm * ph,
                f_prime: (mp - i * k * mm) * ph,
                df_dk: (pm - i * x * mm) * ph,
                dfp_dk: (pp - i * mm - i * k * pm - i * x * (mp - i * k * mm)) * ph,
                side,
                x,
            }
        }
    }
}

/// `f_+(x, k)` with `f_+ = e^{ikx}` for `x >= b`, by leftward integration.
pub fn jost_plus(spec: &PotentialSpec, k: Complex64, x_eval: f64) -> Result<JostValue> {
    let m = jost_m(spec, k, Side::Plus, x_eval)?;
    Ok(to_jost(Side::Plus, k, x_eval, m))
}

/// `f_-(x, k)` with `f_- = e^{-ikx}` for `x <= -b`, by rightward integration.
pub fn jost_minus(spec: &PotentialSpec, k: Complex64, x_eval: f64) -> Result<JostValue> {
    let m = jost_m(spec, k, Side::Minus, x_eval)?;
    Ok(to_jost(Side::Minus, k, x_eval, m))
}

/// The Wronskians and scattering coefficients at a complex wavenumber.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringData {
    pub k: Complex64,
    pub w: Complex64,
    pub s_minus: Complex64,
    pub s_plus: Complex64,
    /// `2ik/w`; undefined at `k = 0` or at zeros of `w`.
    pub t: Option<Complex64>,
    pub r_minus: Option<Complex64>,
    pub r_plus: Option<Complex64>,
}

impl ScatteringData {
    pub fn assemble(k: Complex64, w: Complex64, s_minus: Complex64, s_plus: Complex64) -> Self {
        let defined = w.norm() > 0.0 && k.norm() > 0.0;
        let t = defined.then(|| Complex64::new(0.0, 2.0) * k / w);
        let r_minus = defined.then(|| s_minus / w);
        let r_plus = defined.then(|| s_plus / w);
        ScatteringData {
            k,
            w,
            s_minus,
            s_plus,
            t,
            r_minus,
            r_plus,
        }
    }
}

/// Scattering data together with `k`-derivatives of the entire functions,
/// from the variational ODE.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringEval {
    pub data: ScatteringData,
    pub w_prime: Complex64,
    pub s_minus_prime: Complex64,
    pub s_plus_prime: Complex64,
}

fn wronskian_at(jm: &JostValue, jp: &JostValue) -> (Complex64, Complex64) {
    let w = jm.f * jp.f_prime - jm.f_prime * jp.f;
    let wp = jm.df_dk * jp.f_prime + jm.f * jp.dfp_dk - jm.dfp_dk * jp.f - jm.f_prime * jp.df_dk;
    (w, wp)
}

/// `s_-(k) = f_+(x,-k) f_-'(x,k) - f_+'(x,-k) f_-(x,k)` and its derivative.
fn s_minus_at(jp_neg: &JostValue, jm_pos: &JostValue) -> (Complex64, Complex64) {
    let s = jp_neg.f * jm_pos.f_prime - jp_neg.f_prime * jm_pos.f;
    // d/dk f_+(x,-k) = -(df/dk)(x,-k).
    let sp = -jp_neg.df_dk * jm_pos.f_prime + jp_neg.f * jm_pos.dfp_dk + jp_neg.dfp_dk * jm_pos.f
        - jp_neg.f_prime * jm_pos.df_dk;
    (s, sp)
}

/// Full scattering data at `k`, evaluated at the common point `x = x_eval`
/// (the Wronskians are x-independent; x-independence is covered by tests).
pub fn scattering_eval_at(
    spec: &PotentialSpec,
    k: Complex64,
    x_eval: f64,
) -> Result<ScatteringEval> {
    let jp = jost_plus(spec, k, x_eval)?;
    let jm = jost_minus(spec, k, x_eval)?;
    let jp_neg = jost_plus(spec, -k, x_eval)?;
    let jm_neg = jost_minus(spec, -k, x_eval)?;

    let (w, w_prime) = wronskian_at(&jm, &jp);
    let (s_minus, s_minus_prime) = s_minus_at(&jp_neg, &jm);
    // s_+(k) = s_-(-k), hence s_+'(k) = -s_-'(-k).
    let (s_plus, s_plus_neg_prime) = s_minus_at(&jp, &jm_neg);
    Ok(ScatteringEval {
        data: ScatteringData::assemble(k, w, s_minus, s_plus),
        w_prime,
        s_minus_prime,
        s_plus_prime: -s_plus_neg_prime,
    })
}

pub fn scattering_eval(spec: &PotentialSpec, k: Complex64) -> Result<ScatteringEval> {
    scattering_eval_at(spec, k, 0.0)
}

pub fn scattering_data(spec: &PotentialSpec, k: Complex64) -> Result<ScatteringData> {
    Ok(scattering_eval(spec, k)?.data)
}

/// `w(i kappa)` as a real number. On the imaginary axis the rescaled Jost
/// system has real data, so the Wronskian is real up to roundoff; the
/// residual imaginary part is discarded.
pub fn wronskian_on_axis(spec: &PotentialSpec, kappa: f64) -> Result<f64> {
    let (w, _) = wronskian_on_axis_with_deriv(spec, kappa)?;
    Ok(w)
}

/// `(w(i kappa), d/d kappa w(i kappa))`, both real.
pub fn wronskian_on_axis_with_deriv(spec: &PotentialSpec, kappa: f64) -> Result<(f64, f64)> {
    let k = Complex64::new(0.0, kappa);
    let jp = jost_plus(spec, k, 0.0)?;
    let jm = jost_minus(spec, k, 0.0)?;
    let (w, wp) = wronskian_at(&jm, &jp);
    // d/dkappa = i d/dk.
    Ok((w.re, (Complex64::new(0.0, 1.0) * wp).re))
}

/// `s_-(i kappa)` restricted to the axis, with its kappa-derivative.
pub fn s_minus_on_axis_with_deriv(spec: &PotentialSpec, kappa: f64) -> Result<(f64, f64)> {
    let k = Complex64::new(0.0, kappa);
    let jm = jost_minus(spec, k, 0.0)?;
    let jp_neg = jost_plus(spec, -k, 0.0)?;
    let (s, sp) = s_minus_at(&jp_neg, &jm);
    Ok((s.re, (Complex64::new(0.0, 1.0) * sp).re))
}
