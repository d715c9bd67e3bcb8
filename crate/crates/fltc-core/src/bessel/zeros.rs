//! Zero tables for `J_m'` and for the annulus cross-product function.

use serde::{Deserialize, Serialize};

use super::{bessel_j, bessel_j_prime, bessel_j_second, bessel_y_prime, bessel_y_second};
use crate::error::{Error, Result};
use crate::rootfind::scan_roots;

/// Which function the table holds zeros of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    /// Zeros of `J_m'`. For `m = 0` these are the positive zeros of `J_1`.
    JPrime,
    /// Zeros of `ξ ↦ J_m'(ρξ) Y_m'(ξ) − J_m'(ξ) Y_m'(ρξ)` with `ρ = r0/R`.
    AnnulusCross,
}

/// Ascending positive zeros of a Bessel-type target function, indexed
/// `k = 1, 2, …`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub kind: ZeroKind,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    /// k-th zero, 1-based.
    pub fn zero(&self, k: usize) -> f64 {
        self.zeros[k - 1]
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    fn check_increasing(&self) -> Result<()> {
        for w in self.zeros.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Convergence {
                    context: "BesselZeroTable",
                    lo: w[0],
                    hi: w[1],
                    message: "zeros not strictly increasing".into(),
                });
            }
        }
        Ok(())
    }
}

const SCAN_STEP: f64 = std::f64::consts::PI / 8.0;
const BISECT_TOL: f64 = 1e-13;

/// First `count` positive zeros of `J_m'`.
///
/// For `m ≥ 1` the first zero precedes the first zero of `J_m`; for `m = 0`
/// the zeros are those of `J_1` (since `J_0' = −J_1`). Zeros are bracketed by
/// a sign-change scan with step π/8, refined by bisection and one Newton
/// polish step.
pub fn jprime_zeros(m: u32, count: usize) -> Result<BesselZeroTable> {
    if count == 0 || count > 500 {
        return Err(Error::Parameter {
            context: "jprime_zeros",
            message: format!("count = {count} not in 1..=500"),
        });
    }
    let f = |x: f64| bessel_j_prime(m, x).unwrap_or(f64::NAN);
    let df = |x: f64| bessel_j_second(m, x).unwrap_or(f64::NAN);
    let start = if m == 0 { 0.5 } else { 0.85 * m as f64 };
    let max_x = start + m as f64 + 1.3 * (count as f64 + 2.0) * std::f64::consts::PI + 30.0;
    let zeros = scan_roots(&f, &df, start, SCAN_STEP, count, BISECT_TOL, max_x, "jprime_zeros")?;

    let table = BesselZeroTable { kind: ZeroKind::JPrime, m, ratio: None, zeros };
    table.check_increasing()?;
    for &z in &table.zeros {
        let resid = f(z).abs();
        let bound = 1e-12 * (df(z).abs() * z).max(1.0);
        if !(resid < bound) {
            return Err(Error::Convergence {
                context: "jprime_zeros",
                lo: z,
                hi: z,
                message: format!("residual {resid} exceeds bound {bound}"),
            });
        }
    }
    // interlacing with the zeros of J_m: the sign of J_m alternates across
    // consecutive extrema (bracketing aid asserted on the computed table)
    for w in table.zeros.windows(2) {
        let a = bessel_j(m, w[0])?;
        let b = bessel_j(m, w[1])?;
        if a.signum() == b.signum() {
            return Err(Error::Convergence {
                context: "jprime_zeros",
                lo: w[0],
                hi: w[1],
                message: "interlacing violated: a J_m zero was skipped".into(),
            });
        }
    }
    Ok(table)
}

/// The annulus cross-product function
/// `g(ξ) = J_m'(ρξ) Y_m'(ξ) − J_m'(ξ) Y_m'(ρξ)`.
pub fn annulus_cross(m: u32, ratio: f64, xi: f64) -> Result<f64> {
    Ok(bessel_j_prime(m, ratio * xi)? * bessel_y_prime(m, xi)?
        - bessel_j_prime(m, xi)? * bessel_y_prime(m, ratio * xi)?)
}

fn annulus_cross_deriv(m: u32, ratio: f64, xi: f64) -> Result<f64> {
    Ok(ratio * bessel_j_second(m, ratio * xi)? * bessel_y_prime(m, xi)?
        + bessel_j_prime(m, ratio * xi)? * bessel_y_second(m, xi)?
        - bessel_j_second(m, xi)? * bessel_y_prime(m, ratio * xi)?
        - ratio * bessel_j_prime(m, xi)? * bessel_y_second(m, ratio * xi)?)
}

/// First `count` positive zeros of the annulus cross-product function.
///
/// These are the Neumann frequencies of the annulus with radii ratio
/// `ρ = r0/R`. Validated for `ratio ∈ (0.05, 0.95)` and `count ≤ 200`.
pub fn annulus_cross_zeros(m: u32, ratio: f64, count: usize) -> Result<BesselZeroTable> {
    if !(ratio > 0.05 && ratio < 0.95) {
        return Err(Error::Parameter {
            context: "annulus_cross_zeros",
            message: format!("ratio = {ratio} outside validated range (0.05, 0.95)"),
        });
    }
    if count == 0 || count > 200 {
        return Err(Error::Parameter {
            context: "annulus_cross_zeros",
            message: format!("count = {count} not in 1..=200"),
        });
    }
    let f = |x: f64| annulus_cross(m, ratio, x).unwrap_or(f64::NAN);
    let df = |x: f64| annulus_cross_deriv(m, ratio, x).unwrap_or(f64::NAN);
    // g is singular like −ξ^{−2} at 0 for m ≥ 1 and tends to a positive
    // constant for m = 0; either way no zeros hide below the scan start.
    let start = 0.01;
    let max_x = 2.0 * m as f64 + 1.3 * (count as f64 + 2.0) * std::f64::consts::PI / (1.0 - ratio) + 30.0;
    let zeros = scan_roots(
        &f,
        &df,
        start,
        SCAN_STEP,
        count,
        BISECT_TOL,
        max_x,
        "annulus_cross_zeros",
    )?;

    let table = BesselZeroTable { kind: ZeroKind::AnnulusCross, m, ratio: Some(ratio), zeros };
    table.check_increasing()?;
    for &z in &table.zeros {
        let resid = f(z).abs();
        // Two admissible certificates. The flat 1e-10 bound covers the
        // oscillatory regime. For z below the order's turning point one
        // cross term carries an enormous Y' factor that amplifies f64
        // noise, while the zero location stays pinned by the small J'
        // factor; there the honest certificate is the Newton-step bound
        // |g(z)| < 1e-12·max(1, |g'(z)|·z) of the table invariant.
        let newton_bound = 1e-12 * (df(z).abs() * z).max(1.0);
        if !(resid < 1e-10 || resid < newton_bound) {
            return Err(Error::Convergence {
                context: "annulus_cross_zeros",
                lo: z,
                hi: z,
                message: format!(
                    "residual {resid} exceeds both 1e-10 and the Newton-step bound {newton_bound}"
                ),
            });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Brute-force oracle: fine sign-change scan with the given step,
    /// refined by plain bisection. Independent of the production scan
    /// parameters.
    fn fine_scan<F: Fn(f64) -> f64>(f: F, start: f64, step: f64, count: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let mut x = start;
        let mut fx = f(x);
        while out.len() < count {
            let xn = x + step;
            let fxn = f(xn);
            if fx.is_finite() && fxn.is_finite() && fx != 0.0 && fxn.signum() != fx.signum() {
                let (mut lo, mut hi) = (x, xn);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid).signum() == f(lo).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            x = xn;
            fx = fxn;
            assert!(x < 1e4, "oracle scan ran away");
        }
        out
    }

    #[test]
    fn first_jprime_zero_order_one() {
        let t = jprime_zeros(1, 1).unwrap();
        let oracle = fine_scan(|x| bessel_j_prime(1, x).unwrap(), 0.5, 1e-3, 1)[0];
        assert_abs_diff_eq!(t.zero(1), oracle, epsilon = 1e-9);
        assert_abs_diff_eq!(t.zero(1), 1.8412, epsilon = 1e-4);
    }

    #[test]
    fn first_jprime_zero_order_zero_is_first_j1_zero() {
        let t = jprime_zeros(0, 1).unwrap();
        let oracle = fine_scan(|x| bessel_j_prime(0, x).unwrap(), 0.5, 1e-3, 1)[0];
        assert_abs_diff_eq!(t.zero(1), oracle, epsilon = 1e-9);
        assert_abs_diff_eq!(t.zero(1), 3.8317059702075123, epsilon = 1e-10);
    }

    #[test]
    fn jprime_table_strictly_increasing() {
        let t = jprime_zeros(2, 5).unwrap();
        for w in t.zeros.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn jprime_residuals_and_simple_sign_change() {
        for m in 0..=5u32 {
            let t = jprime_zeros(m, 20).unwrap();
            for &z in &t.zeros {
                assert!(bessel_j_prime(m, z).unwrap().abs() < 1e-10);
                let d = 1e-5 * z.max(1.0);
                let a = bessel_j_prime(m, z - d).unwrap();
                let b = bessel_j_prime(m, z + d).unwrap();
                assert!(a.signum() != b.signum(), "m={m} z={z} not a simple zero");
            }
        }
    }

    #[test]
    fn watson_first_extremum_dominates() {
        // |J_m(j'_{m,1})| > |J_m(x)| for all x > j'_{m,1}, m ≥ 1
        for m in 1..=6u32 {
            let z1 = jprime_zeros(m, 1).unwrap().zero(1);
            let peak = bessel_j(m, z1).unwrap().abs();
            let mut x = z1 + 0.01;
            while x <= 100.0 {
                assert!(
                    peak > bessel_j(m, x).unwrap().abs(),
                    "m={m} x={x} dominates first extremum"
                );
                x += 0.05;
            }
        }
    }

    #[test]
    fn annulus_zeros_match_fine_scan() {
        let t = annulus_cross_zeros(1, 0.3, 3).unwrap();
        let oracle = fine_scan(
            |x| annulus_cross(1, 0.3, x).unwrap(),
            0.01,
            1e-4,
            3,
        );
        for k in 0..3 {
            assert_abs_diff_eq!(t.zeros[k], oracle[k], epsilon = 1e-8);
        }
    }

    #[test]
    fn annulus_residuals_below_tolerance() {
        for m in 0..=3u32 {
            let t = annulus_cross_zeros(m, 0.3, 10).unwrap();
            for &c in &t.zeros {
                assert!(annulus_cross(m, 0.3, c).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn annulus_zeros_depend_on_ratio() {
        let a = annulus_cross_zeros(1, 0.3, 3).unwrap();
        let b = annulus_cross_zeros(1, 0.5, 3).unwrap();
        for k in 0..3 {
            assert!((a.zeros[k] - b.zeros[k]).abs() > 1e-3);
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(jprime_zeros(1, 0).is_err());
        assert!(jprime_zeros(1, 501).is_err());
        assert!(annulus_cross_zeros(1, 0.01, 3).is_err());
        assert!(annulus_cross_zeros(1, 0.99, 3).is_err());
    }

    #[test]
    fn table_serializes_to_stated_schema() {
        let t = jprime_zeros(1, 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["kind"], "j_prime");
        assert_eq!(v["m"], 1);
        assert!(v["zeros"].as_array().unwrap().len() == 2);
        let back: BesselZeroTable = serde_json::from_value(v).unwrap();
        assert_eq!(back.zeros, t.zeros);
    }
}
