//! Dormand–Prince 5(4) with adaptive step control for small real systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, max_steps: 1_000_000 }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from `t0` to `t1` and return `y(t1)`.
pub fn integrate<F>(f: F, t0: f64, t1: f64, y0: &[f64], tol: Tolerance) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    if t1 == t0 {
        return Ok(y);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut h = (span * 1e-3).clamp(1e-12, 1e-2);
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    f(t, &y, &mut k[0]);
    for _ in 0..tol.max_steps {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            return Ok(y);
        }
        h = h.min(remaining);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (r, kr) in k.iter().enumerate().take(s) {
                    acc += dir * h * A[s][r] * kr[i];
                }
                tmp[i] = acc;
            }
            f(t + dir * h * C[s], &tmp, &mut k[s]);
        }
        let mut err = 0.0f64;
        let mut ynew = vec![0.0; n];
        for i in 0..n {
            let mut y5 = y[i];
            let mut e = 0.0;
            for s in 0..7 {
                y5 += dir * h * B5[s] * k[s][i];
                e += dir * h * (B5[s] - B4[s]) * k[s][i];
            }
            ynew[i] = y5;
            let sc = tol.atol + tol.rtol * y[i].abs().max(y5.abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            return Err(Error::NumericalAbort { t, reason: "non-finite state in adaptive integrator".into() });
        }
        if err <= 1.0 {
            t = if h >= remaining { t1 } else { t + dir * h };
            y = ynew;
            // first-same-as-last
            k.swap(0, 6);
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h < 1e-14 * span {
            return Err(Error::ToleranceNotMet { tol: tol.rtol, steps: 0 });
        }
    }
    Err(Error::ToleranceNotMet { tol: tol.rtol, steps: tol.max_steps })
}
