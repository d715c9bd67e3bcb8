//! Regular Sturm-Liouville problems on compact intervals with Neumann
//! boundary conditions: `ℓu = −(1/r)(p u')'` on `[a, b]`.
//!
//! Both endpoints are regular: the coefficients are smooth, positive and
//! bounded away from 0 on the closed interval (validated by sampling).
//! The solver produces the solutions `w_λ` of `ℓw = λw`, `w(a) = 1`,
//! `(pw')(a) = 0`, the Neumann eigenvalues by Prüfer-angle shooting, the
//! triple kernel `q_t`, and the product-formula measures `ν_{x,y}` whose
//! `t ↓ 0` limit yields the convolution where it exists.

mod kernel;
mod ode;
mod shooting;

pub use kernel::{
    convolution_table, default_t_schedule, kernel_q_sl, product_measure, ProductMeasure,
    SLConvolutionBuild, SLEigenTable,
};
pub use ode::{integrate, integrate_path};
pub use shooting::{neumann_eigenvalues, shooting_residual, solve_w};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coefficient function with closed-form derivative; every variant is
/// smooth on the validated interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Coefficient {
    Constant { value: f64 },
    /// `c_0 + c_1 x + c_2 x² + …`
    Polynomial { coeffs: Vec<f64> },
    /// `(1−x)^α (1+x)^β`, for intervals inside `(−1, 1)`.
    JacobiLike { alpha: f64, beta: f64 },
}

impl Coefficient {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Coefficient::Constant { value } => *value,
            Coefficient::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            Coefficient::JacobiLike { alpha, beta } => {
                (1.0 - x).powf(*alpha) * (1.0 + x).powf(*beta)
            }
        }
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        match self {
            Coefficient::Constant { .. } => 0.0,
            Coefficient::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * x + k as f64 * c;
                }
                acc
            }
            Coefficient::JacobiLike { alpha, beta } => {
                let f = self.eval(x);
                f * (-alpha / (1.0 - x) + beta / (1.0 + x))
            }
        }
    }
}

/// Sturm-Liouville data: interval and positive coefficients `p`, `r`.
/// Smoothness is guaranteed by the coefficient variants; positivity and
/// boundedness away from zero are validated on a 1000-point sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SLProblem {
    pub a: f64,
    pub b: f64,
    pub p: Coefficient,
    pub r: Coefficient,
}

impl SLProblem {
    pub fn new(a: f64, b: f64, p: Coefficient, r: Coefficient) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Parameter {
                context: "SLProblem::new",
                message: format!("need a finite interval with a < b, got [{a}, {b}]"),
            });
        }
        let problem = SLProblem { a, b, p, r };
        for k in 0..=1000 {
            let x = a + (b - a) * k as f64 / 1000.0;
            let (pv, rv) = (problem.p.eval(x), problem.r.eval(x));
            if !(pv > 1e-12 && rv > 1e-12) || !pv.is_finite() || !rv.is_finite() {
                return Err(Error::Parameter {
                    context: "SLProblem::new",
                    message: format!(
                        "coefficients must be positive and finite on [a,b]: p({x}) = {pv}, r({x}) = {rv}"
                    ),
                });
            }
        }
        Ok(problem)
    }

    /// The cosine oracle: `p = r = 1` on `[0, β]`, whose eigenfunctions are
    /// `cos(π(j−1)x/β)` — also the 1-D rectangle.
    pub fn cosine(beta: f64) -> Self {
        SLProblem {
            a: 0.0,
            b: beta,
            p: Coefficient::Constant { value: 1.0 },
            r: Coefficient::Constant { value: 1.0 },
        }
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Loads a problem from the JSON preset schema
    /// `{interval: [a, b], p: {...}, r: {...}}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |m: String| Error::Parameter { context: "SLProblem::from_json", message: m };
        let interval = v["interval"]
            .as_array()
            .ok_or_else(|| bad("missing interval".into()))?;
        if interval.len() != 2 {
            return Err(bad("interval must be [a, b]".into()));
        }
        let a = interval[0].as_f64().ok_or_else(|| bad("bad a".into()))?;
        let b = interval[1].as_f64().ok_or_else(|| bad("bad b".into()))?;
        let p: Coefficient = serde_json::from_value(v["p"].clone())
            .map_err(|e| bad(format!("bad p coefficient: {e}")))?;
        let r: Coefficient = serde_json::from_value(v["r"].clone())
            .map_err(|e| bad(format!("bad r coefficient: {e}")))?;
        SLProblem::new(a, b, p, r)
    }
}

/// The discrete Neumann spectrum: ascending simple eigenvalues with the
/// `L²(r)` norms of the shooting solutions `w_{λ_j}` (so the spectral
/// measure is `ρ = Σ_j δ_{λ_j}/‖w_{λ_j}‖²`) and certified sup bounds.
#[derive(Debug, Clone, Serialize)]
pub struct SLSpectrum {
    pub lambdas: Vec<f64>,
    pub norms_sq: Vec<f64>,
    pub sup_bounds: Vec<f64>,
}

impl SLSpectrum {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}
