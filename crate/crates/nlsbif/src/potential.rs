//! Real, compactly supported potentials on `[-b, b]`.
//!
//! Every other module evaluates potentials only through [`PotentialSpec`],
//! which is immutable after construction and cheap to share.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single cubic cell of a piecewise potential, coefficients in the local
/// coordinate `x - x_left`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CubicCell {
    pub coeffs: [f64; 4],
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum Kind {
    /// `V(x) = -alpha` on `|x| <= b`, zero outside.
    SquareWell,
    /// The two-parameter single-well family on `|x| <= 1`:
    /// `V(x) = -alpha * W(x;beta) / max W`, with
    /// `W(x;beta) = exp(-(x-beta)^2/4) * (1 + cos(pi x)) / 2`.
    SmoothWell,
    /// Tabulated cubic cells between user breakpoints.
    PiecewiseCubic,
    /// `alpha * delta(x)`; has no pointwise evaluation and is handled only
    /// by the closed-form oracle.
    DeltaClosedForm,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PotentialSpec {
    pub kind: Kind,
    pub alpha: f64,
    pub beta: f64,
    pub half_width_b: f64,
    pub breakpoints: Vec<f64>,
    pub cells: Vec<CubicCell>,
    /// Cached `max_x W(x;beta)` for SmoothWell.
    envelope_max: f64,
}

fn smooth_envelope(x: f64, beta: f64) -> f64 {
    if x.abs() > 1.0 {
        return 0.0;
    }
    (-(x - beta).powi(2) / 4.0).exp() * 0.5 * (1.0 + (std::f64::consts::PI * x).cos())
}

/// Grid scan followed by golden-section refinement.
fn envelope_max(beta: f64) -> f64 {
    let n = 4001;
    let mut best_i = 0;
    let mut best = f64::MIN;
    for i in 0..n {
        let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let v = smooth_envelope(x, beta);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let h = 2.0 / (n - 1) as f64;
    let x0 = -1.0 + best_i as f64 * h;
    let mut a = (x0 - h).max(-1.0);
    let mut b = (x0 + h).min(1.0);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = smooth_envelope(c, beta);
    let mut fd = smooth_envelope(d, beta);
    while (b - a) > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = smooth_envelope(c, beta);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = smooth_envelope(d, beta);
        }
    }
    smooth_envelope(0.5 * (a + b), beta)
}

impl PotentialSpec {
    pub fn square_well(alpha: f64, b: f64) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::InvalidPotential("half width must be positive".into()));
        }
        Ok(PotentialSpec {
            kind: Kind::SquareWell,
            alpha,
            beta: 0.0,
            half_width_b: b,
            breakpoints: vec![],
            cells: vec![],
            envelope_max: 0.0,
        })
    }

    pub fn smooth_well(alpha: f64, beta: f64) -> Result<Self> {
        let m = envelope_max(beta);
        if m <= 0.0 {
            return Err(Error::InvalidPotential("degenerate envelope".into()));
        }
        Ok(PotentialSpec {
            kind: Kind::SmoothWell,
            alpha,
            beta,
            half_width_b: 1.0,
            breakpoints: vec![],
            cells: vec![],
            envelope_max: m,
        })
    }

    /// Breakpoints must span `[-b, b]`; continuity across interior
    /// breakpoints is checked to 1e-8 at construction.
    pub fn piecewise_cubic(breakpoints: Vec<f64>, cells: Vec<CubicCell>) -> Result<Self> {
        if breakpoints.len() < 2 || cells.len() != breakpoints.len() - 1 {
            return Err(Error::InvalidPotential(
                "need n+1 breakpoints for n cells".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPotential(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let b = breakpoints[breakpoints.len() - 1];
        if (breakpoints[0] + b).abs() > 1e-12 || b <= 0.0 {
            return Err(Error::InvalidPotential(
                "breakpoints must span a symmetric interval [-b, b]".into(),
            ));
        }
        for i in 1..breakpoints.len() - 1 {
            let h = breakpoints[i] - breakpoints[i - 1];
            let c = &cells[i - 1].coeffs;
            let left = c[0] + c[1] * h + c[2] * h * h + c[3] * h * h * h;
            let right = cells[i].coeffs[0];
            if (left - right).abs() > 1e-8 {
                return Err(Error::InvalidPotential(format!(
                    "discontinuity {:.3e} at breakpoint {}",
                    (left - right).abs(),
                    breakpoints[i]
                )));
            }
        }
        Ok(PotentialSpec {
            kind: Kind::PiecewiseCubic,
            alpha: 0.0,
            beta: 0.0,
            half_width_b: b,
            breakpoints,
            cells,
            envelope_max: 0.0,
        })
    }

    pub fn delta(alpha: f64) -> Self {
        PotentialSpec {
            kind: Kind::DeltaClosedForm,
            alpha,
            beta: 0.0,
            half_width_b: 0.0,
            breakpoints: vec![],
            cells: vec![],
            envelope_max: 0.0,
        }
    }

    /// The trivial potential, `V = 0` on `[-b, b]`.
    pub fn free(b: f64) -> Self {
        PotentialSpec::square_well(0.0, b).unwrap()
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        match self.kind {
            Kind::DeltaClosedForm => Err(Error::DeltaNotEvaluable),
            Kind::SquareWell => {
                if x.abs() <= self.half_width_b {
                    Ok(-self.alpha)
                } else {
                    Ok(0.0)
                }
            }
            Kind::SmoothWell => {
                Ok(-self.alpha * smooth_envelope(x, self.beta) / self.envelope_max)
            }
            Kind::PiecewiseCubic => {
                if x < self.breakpoints[0] || x > self.breakpoints[self.breakpoints.len() - 1] {
                    return Ok(0.0);
                }
                let i = match self
                    .breakpoints
                    .binary_search_by(|p| p.partial_cmp(&x).unwrap())
                {
                    Ok(i) => i.min(self.cells.len() - 1),
                    Err(i) => i.saturating_sub(1).min(self.cells.len() - 1),
                };
                let t = x - self.breakpoints[i];
                let c = &self.cells[i].coeffs;
                Ok(c[0] + t * (c[1] + t * (c[2] + t * c[3])))
            }
        }
    }

    /// `max_{|x|<=1} W(x;beta)` for the smooth well family.
    pub fn max_of_envelope(&self) -> Result<f64> {
        match self.kind {
            Kind::SmoothWell => Ok(self.envelope_max),
            _ => Err(Error::WrongKind),
        }
    }

    /// Interior abscissae where the integrator must place step boundaries.
    pub fn interior_breakpoints(&self) -> Vec<f64> {
        match self.kind {
            Kind::PiecewiseCubic => {
                self.breakpoints[1..self.breakpoints.len() - 1].to_vec()
            }
            _ => vec![],
        }
    }

    pub fn is_even(&self, tol: f64) -> bool {
        let b = self.half_width_b;
        if b == 0.0 {
            return true;
        }
        let n = 101;
        (0..n).all(|i| {
            let x = b * i as f64 / (n - 1) as f64;
            match (self.evaluate(x), self.evaluate(-x)) {
                (Ok(vp), Ok(vm)) => (vp - vm).abs() <= tol,
                _ => false,
            }
        })
    }
}

/// On-disk descriptor (JSON or TOML), decoupled from the internal
/// representation so the file schema stays stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialDescriptor {
    pub kind: String,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    #[serde(default)]
    pub coeffs: Vec<[f64; 4]>,
}

impl PotentialDescriptor {
    pub fn build(&self) -> Result<PotentialSpec> {
        match self.kind.as_str() {
            "square_well" => PotentialSpec::square_well(self.alpha, self.b),
            "smooth_well" => PotentialSpec::smooth_well(self.alpha, self.beta),
            "piecewise" => PotentialSpec::piecewise_cubic(
                self.breakpoints.clone(),
                self.coeffs.iter().map(|c| CubicCell { coeffs: *c }).collect(),
            ),
            "delta" => Ok(PotentialSpec::delta(self.alpha)),
            other => Err(Error::InvalidPotential(format!("unknown kind {other:?}"))),
        }
    }

    pub fn from_spec(spec: &PotentialSpec) -> Self {
        let kind = match spec.kind {
            Kind::SquareWell => "square_well",
            Kind::SmoothWell => "smooth_well",
            Kind::PiecewiseCubic => "piecewise",
            Kind::DeltaClosedForm => "delta",
        };
        PotentialDescriptor {
            kind: kind.into(),
            alpha: spec.alpha,
            beta: spec.beta,
            b: spec.half_width_b,
            breakpoints: spec.breakpoints.clone(),
            coeffs: spec.cells.iter().map(|c| c.coeffs).collect(),
        }
    }
}
