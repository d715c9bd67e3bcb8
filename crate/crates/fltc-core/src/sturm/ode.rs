//! Dormand–Prince 5(4) adaptive integrator for small fixed-size systems.

use crate::error::{Error, Result};

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(x, y)` from `x0` to `x1 ≥ x0` with local tolerance
/// control `atol + rtol·|y|` per component.
pub fn integrate<const N: usize, F>(
    f: &F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    rtol: f64,
    atol: f64,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    debug_assert!(x1 >= x0);
    if x1 == x0 {
        return Ok(y0);
    }
    let mut x = x0;
    let mut y = y0;
    let span = x1 - x0;
    let mut h = (span / 64.0).clamp(1e-12, 0.1);
    let mut steps = 0u64;
    while x < x1 {
        steps += 1;
        if steps > 50_000_000 {
            return Err(Error::IntegratorStep {
                x,
                message: "step budget exhausted".into(),
            });
        }
        if x + h > x1 {
            h = x1 - x;
        }
        let k1 = f(x, &y);
        let mut yt = y;
        for i in 0..N {
            yt[i] = y[i] + h * A2[0] * k1[i];
        }
        let k2 = f(x + h / 5.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A3[0] * k1[i] + A3[1] * k2[i]);
        }
        let k3 = f(x + 3.0 * h / 10.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A4[0] * k1[i] + A4[1] * k2[i] + A4[2] * k3[i]);
        }
        let k4 = f(x + 4.0 * h / 5.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A5[0] * k1[i] + A5[1] * k2[i] + A5[2] * k3[i] + A5[3] * k4[i]);
        }
        let k5 = f(x + 8.0 * h / 9.0, &yt);
        for i in 0..N {
            yt[i] = y[i]
                + h * (A6[0] * k1[i] + A6[1] * k2[i] + A6[2] * k3[i] + A6[3] * k4[i]
                    + A6[4] * k5[i]);
        }
        let k6 = f(x + h, &yt);
        let mut y5 = y;
        for i in 0..N {
            y5[i] = y[i]
                + h * (B5[0] * k1[i] + B5[2] * k3[i] + B5[3] * k4[i] + B5[4] * k5[i]
                    + B5[5] * k6[i]);
        }
        let k7 = f(x + h, &y5);
        let mut err_norm = 0.0_f64;
        for i in 0..N {
            let y4i = y[i]
                + h * (B4[0] * k1[i] + B4[2] * k3[i] + B4[3] * k4[i] + B4[4] * k5[i]
                    + B4[5] * k6[i]
                    + B4[6] * k7[i]);
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4i) / sc;
            err_norm += e * e;
        }
        err_norm = (err_norm / N as f64).sqrt();
        if err_norm <= 1.0 {
            x += h;
            y = y5;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < 1e-14 * span {
            return Err(Error::IntegratorStep {
                x,
                message: format!("step size underflow (h = {h})"),
            });
        }
    }
    Ok(y)
}

/// Integrates and records the state at each of the sorted output points
/// (which must lie in `[x0, x1]`, and include neither endpoint necessarily).
pub fn integrate_path<const N: usize, F>(
    f: &F,
    x0: f64,
    y0: [f64; N],
    outputs: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(outputs.len());
    let mut x = x0;
    let mut y = y0;
    for &xo in outputs {
        debug_assert!(xo >= x - 1e-14);
        if xo > x {
            y = integrate(f, x, y, xo, rtol, atol)?;
            x = xo;
        }
        out.push(y);
    }
    Ok(out)
}
