//! Adaptive embedded Runge-Kutta integration for small complex-valued
//! systems.
//!
//! The Dormand-Prince 5(4) pair is used throughout. State vectors are
//! slices of `Complex64`; purely real problems keep exactly zero imaginary
//! parts since every arithmetic operation preserves them.

use num_complex::Complex64;

use crate::error::Error;

/// Dormand-Prince 5(4) Butcher tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [
    1.0 / 5.0,
    3.0 / 10.0,
    4.0 / 5.0,
    8.0 / 9.0,
    1.0,
    1.0,
];
/// Difference between the 5th-order weights and the embedded 4th-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Record the state at every accepted step.
    pub record: bool,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-11,
            atol: 1e-13,
            max_steps: 100_000,
            record: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub x_end: f64,
    pub y_end: Vec<Complex64>,
    /// Accepted abscissae (only if `record` was set; always includes both
    /// endpoints).
    pub xs: Vec<f64>,
    pub ys: Vec<Vec<Complex64>>,
}

/// Integrate `dy/dx = f(x, y)` from `x0` to `x1` (either direction).
///
/// `breakpoints` are interior abscissae the stepper must land on exactly,
/// e.g. discontinuities of a piecewise potential. Values outside the span
/// are ignored.
pub fn integrate<F>(
    mut f: F,
    x0: f64,
    x1: f64,
    y0: &[Complex64],
    breakpoints: &[f64],
    opts: &OdeOptions,
) -> Result<OdeSolution, Error>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let mut sol = OdeSolution {
        x_end: x0,
        y_end: y0.to_vec(),
        xs: Vec::new(),
        ys: Vec::new(),
    };
    if opts.record {
        sol.xs.push(x0);
        sol.ys.push(y0.to_vec());
    }
    if x0 == x1 {
        return Ok(sol);
    }
    let forward = x1 > x0;

    // Segment the span at the interior breakpoints, sorted in the direction
    // of integration.
    let lo = x0.min(x1);
    let hi = x0.max(x1);
    let mut nodes: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&b| b > lo + 1e-14 && b < hi - 1e-14)
        .collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup();
    if !forward {
        nodes.reverse();
    }
    nodes.push(x1);

    let mut x = x0;
    let mut y = y0.to_vec();
    let n = y.len();
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); n]; 7];
    let mut ytmp = vec![Complex64::default(); n];
    let mut steps = 0usize;

    for &seg_end in &nodes {
        let mut h = (seg_end - x) * 0.1;
        if h == 0.0 {
            continue;
        }
        f(x, &y, &mut k[0]);
        loop {
            if (forward && x >= seg_end) || (!forward && x <= seg_end) {
                break;
            }
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::IntegrationFailure { x_last: x });
            }
            if h.abs() < 1e-14 * (1.0 + x.abs()) {
                return Err(Error::IntegrationFailure { x_last: x });
            }
            // Clip to the segment end.
            if (forward && x + h > seg_end) || (!forward && x + h < seg_end) {
                h = seg_end - x;
            }

            // Stages.
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = Complex64::default();
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = A[s - 1][j];
                        if a != 0.0 {
                            acc += kj[i] * a;
                        }
                    }
                    ytmp[i] = y[i] + acc * h;
                }
                let xs = x + C[s - 1] * h;
                let (head, tail) = k.split_at_mut(s);
                let _ = head;
                f(xs, &ytmp, &mut tail[0]);
            }
            // k[6] is the derivative at the 5th-order solution (FSAL);
            // the 6th stage already produced y5 in ytmp.
            let y5 = ytmp.clone();

            // Error estimate.
            let mut err: f64 = 0.0;
            for i in 0..n {
                let mut e = Complex64::default();
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        e += kj[i] * E[j];
                    }
                }
                let e = (e * h).norm();
                let sc = opts.atol + opts.rtol * y[i].norm().max(y5[i].norm());
                err = err.max(e / sc);
            }

            if err <= 1.0 {
                x += h;
                y.copy_from_slice(&y5);
                k.swap(0, 6); // FSAL
                if opts.record {
                    sol.xs.push(x);
                    sol.ys.push(y.clone());
                }
            }
            // Step-size update (standard 5th-order controller).
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        }
    }

    sol.x_end = x;
    sol.y_end = y;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_growth() {
        let y0 = [Complex64::new(1.0, 0.0)];
        let sol = integrate(
            |_, y, dy| dy[0] = y[0],
            0.0,
            1.0,
            &y0,
            &[],
            &OdeOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(sol.y_end[0].re, 1.0f64.exp(), max_relative = 1e-10);
        assert_eq!(sol.y_end[0].im, 0.0);
    }

    #[test]
    fn harmonic_oscillator_backward() {
        // y'' = -y integrated from 1 back to 0.
        let y0 = [
            Complex64::new(1.0f64.cos(), 0.0),
            Complex64::new(-(1.0f64.sin()), 0.0),
        ];
        let sol = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            1.0,
            0.0,
            &y0,
            &[],
            &OdeOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(sol.y_end[0].re, 1.0, max_relative = 1e-10);
        assert_relative_eq!(sol.y_end[1].re, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn complex_rotation() {
        // y' = i y over [0, pi] gives -1.
        let y0 = [Complex64::new(1.0, 0.0)];
        let sol = integrate(
            |_, y, dy| dy[0] = Complex64::new(0.0, 1.0) * y[0],
            0.0,
            std::f64::consts::PI,
            &y0,
            &[0.5, 2.0],
            &OdeOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(sol.y_end[0].re, -1.0, max_relative = 1e-9);
        assert_relative_eq!(sol.y_end[0].im, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn breakpoint_is_hit_exactly() {
        let mut hit = false;
        let y0 = [Complex64::new(0.0, 0.0)];
        // Kinked right-hand side; with the forced node each segment is a
        // polynomial and is integrated exactly.
        let sol = integrate(
            |x, _, dy| {
                if x == 0.3 {
                    hit = true;
                }
                dy[0] = if x < 0.3 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(1.0 + 10.0 * (x - 0.3), 0.0)
                };
            },
            0.0,
            1.0,
            &y0,
            &[0.3],
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(hit);
        assert_relative_eq!(sol.y_end[0].re, 1.0 + 10.0 * 0.49 / 2.0, max_relative = 1e-12);
    }
}
