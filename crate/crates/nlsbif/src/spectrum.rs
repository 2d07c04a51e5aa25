//! Zeros of the entire functions `w(k)`, `s_-(k)`, `s_+(k)`: location on
//! the imaginary axis and in complex rectangles, polishing, classification,
//! and the mode-trace / non-degeneracy quantities that the bifurcation
//! theory needs from each zero.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions};
use crate::potential::PotentialSpec;
use crate::scattering::{
    s_minus_on_axis_with_deriv, scattering_eval, wronskian_on_axis_with_deriv, JOST_ATOL,
    JOST_RTOL,
};

/// Which entire function a zero belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    WFunction,
    SMinusFunction,
    SPlusFunction,
}

impl Target {
    /// Restriction to the imaginary axis `k = i kappa` (real-valued for
    /// real potentials), with the kappa-derivative.
    pub fn on_axis(self, spec: &PotentialSpec, kappa: f64) -> Result<(f64, f64)> {
        match self {
            Target::WFunction => wronskian_on_axis_with_deriv(spec, kappa),
            Target::SMinusFunction => s_minus_on_axis_with_deriv(spec, kappa),
            Target::SPlusFunction => {
                // s_+(i kappa) = s_-(-i kappa).
                let (v, d) = s_minus_on_axis_with_deriv(spec, -kappa)?;
                Ok((v, -d))
            }
        }
    }

    /// Complex value and k-derivative.
    pub fn eval(self, spec: &PotentialSpec, k: Complex64) -> Result<(Complex64, Complex64)> {
        let ev = scattering_eval(spec, k)?;
        Ok(match self {
            Target::WFunction => (ev.data.w, ev.w_prime),
            Target::SMinusFunction => (ev.data.s_minus, ev.s_minus_prime),
            Target::SPlusFunction => (ev.data.s_plus, ev.s_plus_prime),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectralClass {
    BoundStatePole,
    AntiBoundState,
    ComplexResonance,
    TransmissionResonance,
    ThresholdResonance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// Trace quantities of the mode `U_star` normalized to `U(-b) = 1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeTrace {
    pub u_at_minus_b: f64,
    pub u_at_plus_b: f64,
    pub int_u2: f64,
    pub int_u4: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralPoint {
    pub k_star: Complex64,
    pub target: Target,
    pub class: SpectralClass,
    /// `|target(k_star)|` after polishing.
    pub residual: f64,
    /// `|target'(k_star)|`; a simple zero has this bounded away from zero.
    pub deriv_magnitude: f64,
    /// Set when the simple-zero check `|target'| > 1e-6 * scale` fails.
    pub possibly_multiple: bool,
    pub mode_trace: Option<ModeTrace>,
    pub nondegeneracy: Option<f64>,
    pub degenerate: bool,
    pub parity: Parity,
}

impl SpectralPoint {
    pub fn kappa(&self) -> f64 {
        self.k_star.im
    }
}

/// Axis tolerance for "purely imaginary".
pub fn on_axis_tol(k: Complex64) -> f64 {
    1e-6 * (1.0 + k.norm())
}

fn classify_axis(target: Target, kappa: f64) -> SpectralClass {
    if kappa.abs() < 1e-3 {
        return SpectralClass::ThresholdResonance;
    }
    match target {
        Target::WFunction => {
            if kappa > 0.0 {
                SpectralClass::BoundStatePole
            } else {
                SpectralClass::AntiBoundState
            }
        }
        _ => SpectralClass::TransmissionResonance,
    }
}

/// Scan the axis restriction of `target` on a kappa-grid, bracket sign
/// changes, and refine each root by bisection followed by Newton using the
/// variational derivative.
pub fn scan_axis(
    spec: &PotentialSpec,
    target: Target,
    kappa_min: f64,
    kappa_max: f64,
    n_grid: usize,
) -> Result<Vec<SpectralPoint>> {
    assert!(kappa_min < kappa_max && n_grid >= 2);
    let mut vals = Vec::with_capacity(n_grid);
    for i in 0..n_grid {
        let kappa = kappa_min + (kappa_max - kappa_min) * i as f64 / (n_grid - 1) as f64;
        let (v, _) = target.on_axis(spec, kappa)?;
        vals.push((kappa, v));
    }
    let mut points = Vec::new();
    for w in vals.windows(2) {
        let (ka, va) = w[0];
        let (kb, vb) = w[1];
        if va == 0.0 {
            // Grid point exactly on a root; the refinement below would
            // miss it, polish from here directly.
            points.push(polish_axis(spec, target, ka)?);
            continue;
        }
        if va * vb < 0.0 {
            let mut lo = ka;
            let mut hi = kb;
            let mut flo = va;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let (fm, _) = target.on_axis(spec, mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo < 1e-9 {
                    break;
                }
            }
            points.push(polish_axis(spec, target, 0.5 * (lo + hi))?);
        }
    }
    Ok(points)
}

fn polish_axis(spec: &PotentialSpec, target: Target, kappa0: f64) -> Result<SpectralPoint> {
    let mut kappa = kappa0;
    let mut val = 0.0;
    let mut deriv = 1.0;
    for _ in 0..50 {
        let (v, d) = target.on_axis(spec, kappa)?;
        val = v;
        deriv = d;
        if d == 0.0 {
            break;
        }
        let step = v / d;
        kappa -= step;
        if step.abs() < 1e-12 {
            let (v, d) = target.on_axis(spec, kappa)?;
            val = v;
            deriv = d;
            break;
        }
    }
    let scale = axis_scale(spec, target, kappa)?;
    Ok(SpectralPoint {
        k_star: Complex64::new(0.0, kappa),
        target,
        class: classify_axis(target, kappa),
        residual: val.abs(),
        deriv_magnitude: deriv.abs(),
        possibly_multiple: deriv.abs() <= 1e-6 * scale,
        mode_trace: None,
        nondegeneracy: None,
        degenerate: false,
        parity: Parity::None,
    })
}

/// Local scale of the target near a point, for relative residual checks.
fn axis_scale(spec: &PotentialSpec, target: Target, kappa: f64) -> Result<f64> {
    let d = 0.5 * (1.0 + kappa.abs());
    let (a, _) = target.on_axis(spec, kappa + d)?;
    let (b, _) = target.on_axis(spec, kappa - d)?;
    Ok(a.abs().max(b.abs()).max(1e-300))
}

/// A closed rectangle in the complex k-plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, k: Complex64) -> bool {
        k.re >= self.re_min && k.re <= self.re_max && k.im >= self.im_min && k.im <= self.im_max
    }

    fn inflate(&self, factor: f64) -> Rect {
        let dre = (self.re_max - self.re_min) * factor;
        let dim = (self.im_max - self.im_min) * factor;
        Rect {
            re_min: self.re_min - dre,
            re_max: self.re_max + dre,
            im_min: self.im_min - dim,
            im_max: self.im_max + dim,
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Count zeros of `target` inside `rect` by the argument principle:
/// composite Gauss-Legendre quadrature of `target'/target` around the
/// boundary, refined until the pre-rounding value is within 0.05 of an
/// integer and stable between successive orders.
pub fn count_zeros_box(spec: &PotentialSpec, target: Target, rect: Rect) -> Result<i64> {
    let rect = clear_boundary(spec, target, rect)?;
    let mut order = 16;
    let mut prev: Option<f64> = None;
    while order <= 512 {
        let val = winding_integral(spec, target, &rect, order)?;
        let rounded = val.round();
        if (val - rounded).abs() < 0.05 {
            if let Some(p) = prev {
                if (p - val).abs() < 0.05 {
                    return Ok(rounded as i64);
                }
            }
            prev = Some(val);
        } else {
            prev = None;
        }
        order *= 2;
    }
    Err(Error::BoundaryZero)
}

fn winding_integral(spec: &PotentialSpec, target: Target, rect: &Rect, order: usize) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(order);
    let corners = rect.corners();
    let mut total = Complex64::default();
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let mid = (a + b) * 0.5;
        let half = (b - a) * 0.5;
        for (t, w) in nodes.iter().zip(&weights) {
            let k = mid + half * *t;
            let (v, d) = target.eval(spec, k)?;
            total += half * *w * d / v;
        }
    }
    Ok((total / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re)
}

/// Make sure no zero sits (numerically) on the boundary; inflate by 1% up
/// to three times, else fail.
fn clear_boundary(spec: &PotentialSpec, target: Target, rect: Rect) -> Result<Rect> {
    let mut r = rect;
    for _ in 0..4 {
        let mut min_v = f64::MAX;
        let mut max_v: f64 = 0.0;
        let corners = r.corners();
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            for j in 0..16 {
                let k = a + (b - a) * (j as f64 / 15.0);
                let (v, _) = target.eval(spec, k)?;
                min_v = min_v.min(v.norm());
                max_v = max_v.max(v.norm());
            }
        }
        if min_v > 1e-8 * max_v {
            return Ok(r);
        }
        r = r.inflate(0.01);
    }
    Err(Error::BoundaryZero)
}

/// Recursively bisect `rect` until each sub-box holds at most one zero,
/// then polish by complex Newton.
pub fn locate_complex_zeros(
    spec: &PotentialSpec,
    target: Target,
    rect: Rect,
    max_depth: usize,
) -> Result<Vec<SpectralPoint>> {
    let mut found = Vec::new();
    locate_rec(spec, target, rect, max_depth, &mut found)?;
    // Deterministic merge order.
    found.sort_by(|a, b| {
        (a.k_star.im, a.k_star.re)
            .partial_cmp(&(b.k_star.im, b.k_star.re))
            .unwrap()
    });
    Ok(found)
}

fn locate_rec(
    spec: &PotentialSpec,
    target: Target,
    rect: Rect,
    depth: usize,
    out: &mut Vec<SpectralPoint>,
) -> Result<()> {
    let n = count_zeros_box(spec, target, rect)?;
    if n == 0 {
        return Ok(());
    }
    if n == 1 {
        out.push(polish_complex(spec, target, rect)?);
        return Ok(());
    }
    if depth == 0 {
        return Err(Error::DepthExceeded);
    }
    let wide = (rect.re_max - rect.re_min) >= (rect.im_max - rect.im_min);
    // Split slightly off-center so a zero exactly on the midline is
    // unlikely to land on the cut.
    let frac = 0.5037;
    let (r1, r2) = if wide {
        let m = rect.re_min + frac * (rect.re_max - rect.re_min);
        (
            Rect { re_max: m, ..rect },
            Rect { re_min: m, ..rect },
        )
    } else {
        let m = rect.im_min + frac * (rect.im_max - rect.im_min);
        (
            Rect { im_max: m, ..rect },
            Rect { im_min: m, ..rect },
        )
    };
    locate_rec(spec, target, r1, depth - 1, out)?;
    locate_rec(spec, target, r2, depth - 1, out)
}

/// Polish the single zero inside `rect`. Newton from the box center can be
/// thrown off (the Newton direction near a critical point of the target
/// points anywhere); if an iterate leaves the guard region the box is
/// halved with another winding count and Newton restarts from the smaller
/// center.
fn polish_complex(spec: &PotentialSpec, target: Target, rect: Rect) -> Result<SpectralPoint> {
    let mut r = rect;
    let mut polished = None;
    for _ in 0..60 {
        if let Some(kv) = newton_in_box(spec, target, &r)? {
            polished = Some(kv);
            break;
        }
        let wide = (r.re_max - r.re_min) >= (r.im_max - r.im_min);
        let frac = 0.5037;
        let (r1, r2) = if wide {
            let m = r.re_min + frac * (r.re_max - r.re_min);
            (Rect { re_max: m, ..r }, Rect { re_min: m, ..r })
        } else {
            let m = r.im_min + frac * (r.im_max - r.im_min);
            (Rect { im_max: m, ..r }, Rect { im_min: m, ..r })
        };
        r = if count_zeros_box(spec, target, r1)? == 1 { r1 } else { r2 };
    }
    let (k, val, deriv) = polished.ok_or(Error::DepthExceeded)?;
    let scale = complex_scale(spec, target, k)?;
    let kappa = k.im;
    let class = if k.re.abs() <= on_axis_tol(k) {
        classify_axis(target, kappa)
    } else {
        match target {
            Target::WFunction => SpectralClass::ComplexResonance,
            _ => SpectralClass::TransmissionResonance,
        }
    };
    Ok(SpectralPoint {
        k_star: k,
        target,
        class,
        residual: val.norm(),
        deriv_magnitude: deriv.norm(),
        possibly_multiple: deriv.norm() <= 1e-6 * scale,
        mode_trace: None,
        nondegeneracy: None,
        degenerate: false,
        parity: Parity::None,
    })
}

/// One guarded Newton run from the center of `r`. Returns the converged
/// point with its value and derivative, or `None` when an iterate escapes
/// the guard region or the iteration stalls.
fn newton_in_box(
    spec: &PotentialSpec,
    target: Target,
    r: &Rect,
) -> Result<Option<(Complex64, Complex64, Complex64)>> {
    let guard = r.inflate(0.5);
    let mut k = r.center();
    for _ in 0..40 {
        let (v, d) = target.eval(spec, k)?;
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let step = v / d;
        let next = k - step;
        if !guard.contains(next) {
            return Ok(None);
        }
        k = next;
        if step.norm() < 1e-13 * (1.0 + k.norm()) {
            let (v, d) = target.eval(spec, k)?;
            return Ok(Some((k, v, d)));
        }
    }
    Ok(None)
}

fn complex_scale(spec: &PotentialSpec, target: Target, k: Complex64) -> Result<f64> {
    let d = 0.5 * (1.0 + k.norm());
    let (a, _) = target.eval(spec, k + Complex64::new(d, 0.0))?;
    let (b, _) = target.eval(spec, k - Complex64::new(d, 0.0))?;
    Ok(a.norm().max(b.norm()).max(1e-300))
}

/// Evaluate `w(0)` directly; at `k = 0` the Jost system is a regular real
/// ODE. The relative scale is |w| sampled on the circle |k| = 0.5.
pub fn detect_threshold(spec: &PotentialSpec) -> Result<Option<SpectralPoint>> {
    let (w0, dw0) = wronskian_on_axis_with_deriv(spec, 0.0)?;
    let mut scale: f64 = 0.0;
    for &k in &[
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, -0.5),
    ] {
        scale = scale.max(scattering_eval(spec, k)?.data.w.norm());
    }
    if w0.abs() >= 1e-6 * scale {
        return Ok(None);
    }
    let parity = if spec.is_even(1e-10) {
        threshold_mode_parity(spec)?
    } else {
        Parity::None
    };
    Ok(Some(SpectralPoint {
        k_star: Complex64::default(),
        target: Target::WFunction,
        class: SpectralClass::ThresholdResonance,
        residual: w0.abs(),
        deriv_magnitude: dw0.abs(),
        possibly_multiple: false,
        mode_trace: None,
        nondegeneracy: None,
        degenerate: false,
        parity,
    }))
}

/// Parity of the zero-energy Neumann mode of an even potential: integrate
/// `H_V U = 0` from `-b` with `U(-b) = 1, U'(-b) = 0` and compare the
/// trace against its reflection.
fn threshold_mode_parity(spec: &PotentialSpec) -> Result<Parity> {
    let b = spec.half_width_b;
    let n = 81;
    let grid: Vec<f64> = (0..n).map(|i| -b + 2.0 * b * i as f64 / (n - 1) as f64).collect();
    let mut breaks = spec.interior_breakpoints();
    breaks.extend_from_slice(&grid[1..n - 1]);
    let mut eval_err = None;
    let sol = integrate(
        |x, y, dy| {
            let v = spec.evaluate(x).unwrap_or_else(|e| {
                eval_err = Some(e);
                0.0
            });
            dy[0] = y[1];
            dy[1] = v * y[0];
        },
        -b,
        b,
        &[Complex64::new(1.0, 0.0), Complex64::default()],
        &breaks,
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
    // Pick out the forced grid values.
    let mut u = vec![f64::NAN; n];
    for (x, y) in sol.xs.iter().zip(&sol.ys) {
        for (j, g) in grid.iter().enumerate() {
            if (x - g).abs() < 1e-12 {
                u[j] = y[0].re;
            }
        }
    }
    let amp = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let even_dev = (0..n)
        .map(|j| (u[j] - u[n - 1 - j]).abs())
        .fold(0.0f64, f64::max);
    let odd_dev = (0..n)
        .map(|j| (u[j] + u[n - 1 - j]).abs())
        .fold(0.0f64, f64::max);
    if even_dev < 1e-8 * amp {
        Ok(Parity::Even)
    } else if odd_dev < 1e-8 * amp {
        Ok(Parity::Odd)
    } else {
        Ok(Parity::None)
    }
}

/// Integrate the linear mode `H_V U = -kappa^2 U` from `x = -b` with the
/// class's left boundary sign, accumulating the integrals of `U^2` and
/// `U^4`, and fill in the mode trace and non-degeneracy functional.
pub fn mode_and_nondegeneracy(spec: &PotentialSpec, point: &SpectralPoint) -> Result<SpectralPoint> {
    let k = point.k_star;
    if k.re.abs() > on_axis_tol(k) || k.im == 0.0 {
        return Err(Error::NotOnAxis);
    }
    let kappa = k.im;
    let b = spec.half_width_b;
    // Left boundary condition: U'(-b) = kappa U(-b) for zeros of w
    // (outgoing at -b), and U'(-b) = -kappa U(-b) for transmission zeros.
    let transmission = matches!(point.class, SpectralClass::TransmissionResonance);
    let slope = if transmission { -kappa } else { kappa };
    let y0 = [
        Complex64::new(1.0, 0.0),
        Complex64::new(slope, 0.0),
        Complex64::default(),
        Complex64::default(),
    ];
    let mut eval_err = None;
    let sol = integrate(
        |x, y, dy| {
            let v = spec.evaluate(x).unwrap_or_else(|e| {
                eval_err = Some(e);
                0.0
            });
            dy[0] = y[1];
            dy[1] = (v + kappa * kappa) * y[0];
            dy[2] = y[0] * y[0];
            dy[3] = y[0] * y[0] * y[0] * y[0];
        },
        -b,
        b,
        &y0,
        &spec.interior_breakpoints(),
        &OdeOptions {
            rtol: JOST_RTOL,
            atol: JOST_ATOL,
            ..OdeOptions::default()
        },
    )?;
    if let Some(e) = eval_err {
        return Err(e);
    }
    let u_b = sol.y_end[0].re;
    let int_u2 = sol.y_end[2].re;
    let int_u4 = sol.y_end[3].re;
    let nondeg = if transmission {
        2.0 * kappa * int_u2 - 1.0 + u_b * u_b
    } else {
        2.0 * kappa * int_u2 + 1.0 + u_b * u_b
    };
    let mut enriched = point.clone();
    enriched.mode_trace = Some(ModeTrace {
        u_at_minus_b: 1.0,
        u_at_plus_b: u_b,
        int_u2,
        int_u4,
    });
    enriched.nondegeneracy = Some(nondeg);
    enriched.degenerate = nondeg.abs() < 1e-8;
    Ok(enriched)
}
