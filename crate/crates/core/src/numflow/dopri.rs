//! Dormand–Prince 5(4) explicit Runge–Kutta integrator with adaptive or
//! fixed steps, in either direction.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepMode {
    Adaptive { rtol: f64, atol: f64 },
    Fixed { h: f64 },
}

impl StepMode {
    pub fn adaptive(rtol: f64) -> Self {
        StepMode::Adaptive { rtol, atol: rtol * 1e-2 }
    }
}

/// Accepted steps of one integration, ordered from the start point.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub xs: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    /// Largest accepted normalized local error estimate (adaptive mode).
    pub max_error_estimate: f64,
    pub rejected: usize,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.ys.last().expect("trajectory holds the initial point")
    }
}

const MAX_STEPS: usize = 1_000_000;

/// Integrates `y' = f(x, y)` from `x0` to `x1`.
pub fn integrate<F>(f: F, x0: f64, y0: &[f64], x1: f64, mode: StepMode) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let dim = y0.len();
    let span = x1 - x0;
    let dir = span.signum();
    let mut traj = Trajectory { xs: vec![x0], ys: vec![y0.to_vec()], max_error_estimate: 0.0, rejected: 0 };
    if span == 0.0 {
        return Ok(traj);
    }
    let mut x = x0;
    let mut y = y0.to_vec();
    let mut h = match mode {
        StepMode::Fixed { h } if h > 0.0 => h,
        StepMode::Fixed { .. } => return Err(Error::Integration("step size must be positive".into())),
        StepMode::Adaptive { .. } => (span.abs() * 1e-3).min(1e-2),
    };
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    f(x, &y, &mut k[0])?;
    let mut steps = 0;
    while dir * (x1 - x) > 1e-14 * span.abs().max(1.0) {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integration(format!("step limit exceeded at x = {x}")));
        }
        let remaining = (x1 - x).abs();
        let last = h >= remaining;
        let hs = dir * h.min(remaining);
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for (j, a) in A[s].iter().enumerate().take(s) {
                    acc += hs * a * k[j][i];
                }
                stage[i] = acc;
            }
            f(x + C[s] * hs, &stage, &mut k[s])?;
        }
        // the last stage is evaluated at the fifth-order solution (FSAL)
        y5.copy_from_slice(&stage);
        let err = match mode {
            StepMode::Fixed { .. } => 0.0,
            StepMode::Adaptive { rtol, atol } => {
                let mut sum = 0.0;
                for i in 0..dim {
                    let mut e = 0.0;
                    for s in 0..7 {
                        e += (B5[s] - B4[s]) * k[s][i];
                    }
                    let sc = atol + rtol * y[i].abs().max(y5[i].abs());
                    sum += (hs * e / sc).powi(2);
                }
                (sum / dim.max(1) as f64).sqrt()
            }
        };
        if !err.is_finite() || y5.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration(format!("non-finite state near x = {x}")));
        }
        if err <= 1.0 {
            x = if last { x1 } else { x + hs };
            y.copy_from_slice(&y5);
            let k6 = k[6].clone();
            k[0] = k6;
            traj.xs.push(x);
            traj.ys.push(y.clone());
            traj.max_error_estimate = traj.max_error_estimate.max(err);
        } else {
            traj.rejected += 1;
        }
        if let StepMode::Adaptive { .. } = mode {
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
            if h < 1e-14 * span.abs().max(1.0) {
                return Err(Error::Integration(format!("step size underflow near x = {x}")));
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(_: f64, y: &[f64], d: &mut [f64]) -> Result<()> {
        d[0] = y[1];
        d[1] = -y[0];
        Ok(())
    }

    #[test]
    fn adaptive_harmonic_oscillator() {
        let t = integrate(harmonic, 0.0, &[0.0, 1.0], 3.0, StepMode::adaptive(1e-10)).unwrap();
        let y = t.last();
        assert!((y[0] - 3f64.sin()).abs() < 1e-9);
        assert!((y[1] - 3f64.cos()).abs() < 1e-9);
        assert!(t.max_error_estimate <= 1.0);
        let back = integrate(harmonic, 0.0, &[0.0, 1.0], -2.0, StepMode::adaptive(1e-10)).unwrap();
        assert!((back.last()[0] + 2f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn fixed_step_fifth_order() {
        let err = |h: f64| {
            let t = integrate(harmonic, 0.0, &[0.0, 1.0], 2.0, StepMode::Fixed { h }).unwrap();
            (t.last()[0] - 2f64.sin()).abs()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        let order = (e1 / e2).log2();
        assert!(order > 4.5 && order < 6.5, "observed order {order}");
    }

    #[test]
    fn failures_are_typed() {
        let blow = |_: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
            d[0] = y[0] * y[0];
            Ok(())
        };
        assert!(matches!(integrate(blow, 0.0, &[1.0], 2.0, StepMode::adaptive(1e-8)), Err(Error::Integration(_))));
        assert!(integrate(harmonic, 0.0, &[0.0, 1.0], 1.0, StepMode::Fixed { h: 0.0 }).is_err());
    }
}
