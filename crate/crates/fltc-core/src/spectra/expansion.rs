//! Uniform eigenfunction/gradient expansion experiment on the rectangle.
//!
//! Expands a smooth test function `h` in the orthonormal Neumann basis and
//! measures sup-norm convergence of the partial sums and of their gradients.
//! The numerically interesting case is a smooth bump centered off-grid: its
//! partial-sum gradient at the bump's steepest point converges to a nonzero
//! value, which is the falsification evidence that no point can be a common
//! critical point of the whole basis.

use serde::Serialize;

use super::{EigenIndex, Spectrum};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};

/// Closed-form test function with closed-form gradient.
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// Finite combination `Σ c_i ω_{idx_i}` of orthonormal eigenfunctions
    /// (indices into the spectrum's sorted pair list).
    EigenCombo(Vec<(usize, f64)>),
    /// Compactly supported smooth bump
    /// `A·exp(−1/(1−‖(x−c)/ρ‖²))` on `‖x−c‖ < ρ`, zero outside.
    Bump { center: Vec<f64>, radius: f64, amplitude: f64 },
}

impl TestFunction {
    pub fn eval(&self, spec: &Spectrum, x: &[f64]) -> Result<f64> {
        match self {
            TestFunction::EigenCombo(terms) => {
                let mut v = 0.0;
                for &(j, c) in terms {
                    v += c * spec.pairs()[j].eval_orthonormal(spec.domain(), x)?;
                }
                Ok(v)
            }
            TestFunction::Bump { center, radius, amplitude } => {
                let u: f64 =
                    x.iter().zip(center).map(|(&xi, &ci)| ((xi - ci) / radius).powi(2)).sum();
                Ok(if u < 1.0 { amplitude * (-1.0 / (1.0 - u)).exp() } else { 0.0 })
            }
        }
    }

    pub fn gradient(&self, spec: &Spectrum, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            TestFunction::EigenCombo(terms) => {
                let d = spec.domain().dim();
                let mut g = vec![0.0; d];
                for &(j, c) in terms {
                    let nrm = spec.pairs()[j].l2_norm_sq.sqrt();
                    let gj = spec.eval_gradient(j, x)?;
                    for (gi, gji) in g.iter_mut().zip(gj) {
                        *gi += c * gji / nrm;
                    }
                }
                Ok(g)
            }
            TestFunction::Bump { center, radius, amplitude } => {
                let u: f64 =
                    x.iter().zip(center).map(|(&xi, &ci)| ((xi - ci) / radius).powi(2)).sum();
                if u >= 1.0 {
                    return Ok(vec![0.0; x.len()]);
                }
                let h = amplitude * (-1.0 / (1.0 - u)).exp();
                let s = 1.0 - u;
                Ok(x.iter()
                    .zip(center)
                    .map(|(&xi, &ci)| -h * 2.0 * (xi - ci) / (radius * radius * s * s))
                    .collect())
            }
        }
    }
}

/// Sup-norm convergence record of the expansion experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub counts: Vec<usize>,
    /// `sup |S_N − h|` over the sample grid, one entry per count.
    pub value_errors: Vec<f64>,
    /// `max‖∇S_N − ∇h‖_∞` over the sample grid, one entry per count.
    pub gradient_errors: Vec<f64>,
    /// Sample point maximizing `‖∇h‖` (the steepest sampled point).
    pub steepest_point: Vec<f64>,
    pub oracle_gradient_at_steepest: Vec<f64>,
    /// Gradient of the largest partial sum at the steepest point.
    pub partial_gradient_at_steepest: Vec<f64>,
    /// `⟨h, ω_j⟩` for every mode below the largest count.
    pub coefficients: Vec<f64>,
}

fn rect_betas<'a>(spec: &'a Spectrum, context: &'static str) -> Result<&'a [f64]> {
    match spec.domain() {
        DomainSpec::Rectangle { betas } => Ok(betas),
        _ => Err(Error::Parameter {
            context,
            message: "expansion experiment is defined on the rectangle".into(),
        }),
    }
}

fn rect_index(index: &EigenIndex) -> &[u32] {
    match index {
        EigenIndex::Rect(js) => js,
        EigenIndex::Polar { .. } => unreachable!("rectangle spectrum"),
    }
}

/// `⟨h, ω_j⟩` for all modes `j < n_modes` by tensor trapezoid quadrature
/// with `quad_n` points per axis.
fn coefficients(
    spec: &Spectrum,
    h: &TestFunction,
    n_modes: usize,
    quad_n: usize,
) -> Result<Vec<f64>> {
    let betas = rect_betas(spec, "gradient_expansion_check")?;
    let d = betas.len();
    let trap = |i: usize| if i == 0 || i == quad_n - 1 { 0.5 } else { 1.0 };
    match d {
        1 => {
            let b = betas[0];
            let hstep = b / (quad_n - 1) as f64;
            let mut out = vec![0.0; n_modes];
            for i in 0..quad_n {
                let x = i as f64 * hstep;
                let hv = h.eval(spec, &[x])? * trap(i) * hstep;
                if hv == 0.0 {
                    continue;
                }
                for (j, o) in out.iter_mut().enumerate() {
                    let jj = rect_index(&spec.pairs()[j].index)[0];
                    *o += hv * (std::f64::consts::PI * jj as f64 * x / b).cos();
                }
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o /= spec.pairs()[j].l2_norm_sq.sqrt();
            }
            Ok(out)
        }
        2 => {
            let (b1, b2) = (betas[0], betas[1]);
            let (h1, h2) = (b1 / (quad_n - 1) as f64, b2 / (quad_n - 1) as f64);
            let j1max = (0..n_modes).map(|j| rect_index(&spec.pairs()[j].index)[0]).max().unwrap();
            let j2max = (0..n_modes).map(|j| rect_index(&spec.pairs()[j].index)[1]).max().unwrap();
            // inner pass: g[j2][i1] = Σ_{i2} w2 h(x1,x2) cos(πj2 x2/β2)
            let mut inner = vec![vec![0.0; quad_n]; j2max as usize + 1];
            for i1 in 0..quad_n {
                let x1 = i1 as f64 * h1;
                for i2 in 0..quad_n {
                    let x2 = i2 as f64 * h2;
                    let hv = h.eval(spec, &[x1, x2])? * trap(i2) * h2;
                    if hv == 0.0 {
                        continue;
                    }
                    for (j2, row) in inner.iter_mut().enumerate() {
                        row[i1] += hv * (std::f64::consts::PI * j2 as f64 * x2 / b2).cos();
                    }
                }
            }
            // outer pass: c[j1][j2] = Σ_{i1} w1 g[j2][i1] cos(πj1 x1/β1)
            let mut table = vec![vec![0.0; j2max as usize + 1]; j1max as usize + 1];
            for (j1, trow) in table.iter_mut().enumerate() {
                for i1 in 0..quad_n {
                    let x1 = i1 as f64 * h1;
                    let c1 = (std::f64::consts::PI * j1 as f64 * x1 / b1).cos() * trap(i1) * h1;
                    for (t, irow) in trow.iter_mut().zip(&inner) {
                        *t += c1 * irow[i1];
                    }
                }
            }
            Ok((0..n_modes)
                .map(|j| {
                    let js = rect_index(&spec.pairs()[j].index);
                    table[js[0] as usize][js[1] as usize] / spec.pairs()[j].l2_norm_sq.sqrt()
                })
                .collect())
        }
        _ => Err(Error::Parameter {
            context: "gradient_expansion_check",
            message: format!("expansion experiment supports d ≤ 2, got d = {d}"),
        }),
    }
}

/// Runs the expansion experiment: partial sums of `h` in the orthonormal
/// basis at each count in `counts` (ascending), sup errors over a
/// `sample_n`-per-axis grid.
pub fn gradient_expansion_check(
    spec: &Spectrum,
    h: &TestFunction,
    counts: &[usize],
    quad_n: usize,
    sample_n: usize,
) -> Result<ExpansionReport> {
    rect_betas(spec, "gradient_expansion_check")?;
    if counts.is_empty() || counts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter {
            context: "gradient_expansion_check",
            message: "counts must be nonempty and strictly increasing".into(),
        });
    }
    let n_modes = *counts.last().unwrap();
    if n_modes > spec.len() {
        return Err(Error::Parameter {
            context: "gradient_expansion_check",
            message: format!("count {n_modes} exceeds spectrum size {}", spec.len()),
        });
    }
    if let TestFunction::Bump { center, radius, .. } = h {
        let betas = rect_betas(spec, "gradient_expansion_check")?;
        let inside = center
            .iter()
            .zip(betas)
            .all(|(&c, &b)| c - radius > 0.0 && c + radius < b);
        if !inside {
            return Err(Error::Parameter {
                context: "gradient_expansion_check",
                message: "bump support must lie strictly inside the rectangle".into(),
            });
        }
    }

    let coef = coefficients(spec, h, n_modes, quad_n)?;

    let samples = spec.domain().sample_points(sample_n);
    let d = spec.domain().dim();
    // oracle values and steepest sampled point
    let mut hvals = Vec::with_capacity(samples.len());
    let mut hgrads = Vec::with_capacity(samples.len());
    let mut steepest = (0usize, -1.0);
    for (i, (xy, _)) in samples.iter().enumerate() {
        let g = h.gradient(spec, xy)?;
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn > steepest.1 {
            steepest = (i, gn);
        }
        hvals.push(h.eval(spec, xy)?);
        hgrads.push(g);
    }

    // accumulate partial sums mode by mode, snapshotting at each count
    let mut sum_vals = vec![0.0; samples.len()];
    let mut sum_grads = vec![vec![0.0; d]; samples.len()];
    let mut value_errors = Vec::with_capacity(counts.len());
    let mut gradient_errors = Vec::with_capacity(counts.len());
    let mut next = 0usize;
    #[allow(clippy::needless_range_loop)]
    for j in 0..n_modes {
        let nrm = spec.pairs()[j].l2_norm_sq.sqrt();
        for (i, (xy, _)) in samples.iter().enumerate() {
            sum_vals[i] += coef[j] * spec.eval(j, xy)? / nrm;
            let g = spec.eval_gradient(j, xy)?;
            for (acc, gi) in sum_grads[i].iter_mut().zip(g) {
                *acc += coef[j] * gi / nrm;
            }
        }
        while next < counts.len() && counts[next] == j + 1 {
            let ve = sum_vals
                .iter()
                .zip(&hvals)
                .map(|(s, h)| (s - h).abs())
                .fold(0.0_f64, f64::max);
            let ge = sum_grads
                .iter()
                .zip(&hgrads)
                .map(|(s, h)| {
                    s.iter().zip(h).map(|(a, b)| (a - b).abs()).fold(0.0_f64, f64::max)
                })
                .fold(0.0_f64, f64::max);
            value_errors.push(ve);
            gradient_errors.push(ge);
            next += 1;
        }
    }

    Ok(ExpansionReport {
        counts: counts.to_vec(),
        value_errors,
        gradient_errors,
        steepest_point: samples[steepest.0].0.clone(),
        oracle_gradient_at_steepest: hgrads[steepest.0].clone(),
        partial_gradient_at_steepest: sum_grads[steepest.0].clone(),
        coefficients: coef,
    })
}
