//! Deterministic CSV and JSON emission. All floats are printed with 17
//! significant digits, rows are emitted in a fixed order, and every file
//! carries the tool version and a digest of the potential it came from,
//! so reruns are byte-identical.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::branch::BranchCurve;
use crate::error::Result;
use crate::glue::{sample_profile, GluedState};
use crate::potential::{PotentialDescriptor, PotentialSpec};
use crate::scattering::ScatteringData;
use crate::spectrum::SpectralPoint;

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// SHA-256 of the canonical JSON form of the potential descriptor.
/// serde_json sorts object keys, so the digest is stable.
pub fn potential_digest(spec: &PotentialSpec) -> String {
    let desc = PotentialDescriptor::from_spec(spec);
    let canonical = serde_json::to_string(&serde_json::to_value(&desc).unwrap()).unwrap();
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    format!("{:x}", h.finalize())
}

/// 17 significant digits, '.' decimal separator, no locale dependence.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<num_complex::Complex64>, re: bool) -> String {
    match v {
        Some(c) => fmt_f64(if re { c.re } else { c.im }),
        None => "nan".to_string(),
    }
}

fn meta_lines(spec: &PotentialSpec, extra: &[(&str, String)]) -> String {
    let mut s = String::new();
    s.push_str(&format!("# tool_version={}\n", tool_version()));
    s.push_str(&format!("# potential_sha256={}\n", potential_digest(spec)));
    for (k, v) in extra {
        s.push_str(&format!("# {k}={v}\n"));
    }
    s
}

/// Scattering table. Rows are sorted by (Re k, Im k); the reflection and
/// transmission columns are nan off the real axis where they are not
/// defined.
pub fn scatter_csv(spec: &PotentialSpec, rows: &[ScatteringData]) -> String {
    let mut rows: Vec<&ScatteringData> = rows.iter().collect();
    rows.sort_by(|a, b| {
        (a.k.re, a.k.im)
            .partial_cmp(&(b.k.re, b.k.im))
            .unwrap()
    });
    let mut out = meta_lines(spec, &[]);
    out.push_str("k_re,k_im,w_re,w_im,sm_re,sm_im,sp_re,sp_im,t_re,t_im,rm_re,rm_im,rp_re,rp_im\n");
    for d in rows {
        let cols = [
            fmt_f64(d.k.re),
            fmt_f64(d.k.im),
            fmt_f64(d.w.re),
            fmt_f64(d.w.im),
            fmt_f64(d.s_minus.re),
            fmt_f64(d.s_minus.im),
            fmt_f64(d.s_plus.re),
            fmt_f64(d.s_plus.im),
            fmt_opt(d.t, true),
            fmt_opt(d.t, false),
            fmt_opt(d.r_minus, true),
            fmt_opt(d.r_minus, false),
            fmt_opt(d.r_plus, true),
            fmt_opt(d.r_plus, false),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Spectral catalogue as JSON with sorted keys.
pub fn spectrum_json(spec: &PotentialSpec, points: &[SpectralPoint]) -> Value {
    json!({
        "tool_version": tool_version(),
        "potential": serde_json::to_value(PotentialDescriptor::from_spec(spec)).unwrap(),
        "potential_sha256": potential_digest(spec),
        "points": serde_json::to_value(points).unwrap(),
    })
}

/// One CSV over a set of labelled branches, one row per accepted point.
pub fn branch_csv(spec: &PotentialSpec, curves: &[(String, &BranchCurve)]) -> String {
    let mut out = meta_lines(spec, &[]);
    out.push_str(
        "branch_id,seed_class,k_star_im,E,eps,N,H1,x_L,x_R,sign_L,sign_R,residual\n",
    );
    let mut curves: Vec<&(String, &BranchCurve)> = curves.iter().collect();
    curves.sort_by(|a, b| a.0.cmp(&b.0));
    for (id, curve) in curves {
        let class = format!("{:?}", curve.seed.class);
        for g in &curve.points {
            let cols = [
                id.clone(),
                class.clone(),
                fmt_f64(curve.seed.k_star.im),
                fmt_f64(g.e),
                fmt_f64(g.eps),
                fmt_f64(g.n),
                fmt_f64(g.h1),
                fmt_f64(g.x_l),
                fmt_f64(g.x_r),
                fmt_f64(g.sign_l),
                fmt_f64(g.sign_r),
                fmt_f64(g.inner.residual_f),
            ];
            out.push_str(&cols.join(","));
            out.push('\n');
        }
    }
    out
}

/// Sampled profile of one glued state as JSON with sorted keys. The window
/// covers the support plus a few tail widths.
pub fn profile_json(spec: &PotentialSpec, state: &GluedState, n: usize) -> Result<Value> {
    let nu = (-state.e).sqrt();
    let span = spec.half_width_b + (5.0 / nu).min(12.0);
    let (xs, psi) = sample_profile(spec, state, -span, span, n)?;
    Ok(json!({
        "tool_version": tool_version(),
        "potential_sha256": potential_digest(spec),
        "E": state.e,
        "eps": state.eps,
        "N": state.n,
        "H1": state.h1,
        "x_L": state.x_l,
        "x_R": state.x_r,
        "sign_L": state.sign_l,
        "sign_R": state.sign_r,
        "grid": xs,
        "psi": psi,
    }))
}
