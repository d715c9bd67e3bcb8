//! Bracketed root finding: sign-change scans, bisection, Newton polish.

use crate::error::{Error, Result};

/// Bisects a sign-change bracket `[lo, hi]` down to absolute width `tol`.
///
/// `f(lo)` and `f(hi)` must have opposite (nonzero) signs.
pub fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    context: &'static str,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Convergence {
            context,
            lo,
            hi,
            message: format!("not a sign-change bracket: f(lo)={flo}, f(hi)={fhi}"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One Newton step from `x`, kept inside `[lo, hi]`; returns `x` unchanged
/// when the derivative is too small for a safe step.
pub fn newton_polish<F, D>(f: &F, df: &D, x: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let d = df(x);
    if d == 0.0 || !d.is_finite() {
        return x;
    }
    let step = f(x) / d;
    let xn = x - step;
    if xn.is_finite() && xn > lo && xn < hi {
        xn
    } else {
        x
    }
}

/// Scans `[start, ∞)` with the given step for the first `count` sign-change
/// brackets of `f`, refining each by bisection to width `bisect_tol` and one
/// Newton step (derivative `df`). Scan points where `f` is not finite or is
/// below `tiny` in magnitude are skipped, which guards against underflowed
/// Bessel tails and endpoint singularities.
#[allow(clippy::too_many_arguments)]
pub fn scan_roots<F, D>(
    f: &F,
    df: &D,
    start: f64,
    step: f64,
    count: usize,
    bisect_tol: f64,
    max_x: f64,
    context: &'static str,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let tiny = 1e-290;
    let mut roots = Vec::with_capacity(count);
    let mut x_prev = start;
    let mut f_prev = f(x_prev);
    let mut x = start;
    while roots.len() < count {
        x += step;
        if x > max_x {
            return Err(Error::Convergence {
                context,
                lo: x_prev,
                hi: x,
                message: format!(
                    "scan exceeded x = {max_x} after locating {} of {count} roots",
                    roots.len()
                ),
            });
        }
        let fx = f(x);
        if !fx.is_finite() || fx.abs() < tiny {
            // do not treat underflow or singular points as sign data
            if fx == 0.0 || !fx.is_finite() {
                x_prev = x;
                f_prev = fx;
                continue;
            }
        }
        if f_prev.is_finite() && f_prev.abs() >= tiny && fx.signum() != f_prev.signum() {
            let r = bisect(f, x_prev, x, bisect_tol, context)?;
            let r = newton_polish(f, df, r, x_prev, x);
            roots.push(r);
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_cosine_root() {
        let f = |x: f64| x.cos();
        let r = bisect(&f, 1.0, 2.0, 1e-13, "test").unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn scan_finds_sine_roots() {
        let f = |x: f64| x.sin();
        let df = |x: f64| x.cos();
        let roots = scan_roots(&f, &df, 0.5, 0.3, 3, 1e-13, 100.0, "test").unwrap();
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k + 1) as f64 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_bracket_is_reported() {
        let f = |x: f64| x * x + 1.0;
        assert!(bisect(&f, -1.0, 1.0, 1e-13, "test").is_err());
    }
}
