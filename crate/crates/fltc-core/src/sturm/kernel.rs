//! The triple kernel `q_t` of the Sturm-Liouville expansion and the
//! product-formula measures `ν_{x,y}` obtained from its `t ↓ 0` limit.
//!
//! Two spectral closures are in play. The continuum one (eigenvalues with
//! `L²(r)` norms) defines `q_t` as the discrete spectral integral
//! `Σ_j e^{−tλ_j} w_j(x) w_j(y) w_j(ξ)/‖w_j‖²`. The grid closure replaces
//! the norms by their quadrature values on the target grid; on uniform
//! cosine grids the modes below the Nyquist index are then exactly
//! orthogonal, so the monitored `t ↓ 0` limit reproduces the convolution
//! measures to rounding instead of stalling at a quadrature floor.

use std::sync::Arc;

use super::shooting::solve_w;
use super::{SLProblem, SLSpectrum};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::measure::{ConvolutionTable, DiscreteMeasure, SparseRow, CLIP_BUDGET};

/// Eigenfunction values tabulated on a point set, with both the continuum
/// norms (from the spectrum) and the grid-quadrature norms.
#[derive(Debug, Clone)]
pub struct SLEigenTable {
    pub lambdas: Vec<f64>,
    pub norms_sq: Vec<f64>,
    pub grid_norms_sq: Vec<f64>,
    /// `values[j][i] = w_{λ_j}(points[i])`.
    pub values: Vec<Vec<f64>>,
    pub points: Vec<f64>,
    /// `r(ξ_i)·(trapezoid weight)_i` — the discretization of `r(ξ)dξ`.
    pub r_weights: Vec<f64>,
}

impl SLEigenTable {
    /// Tabulates the first `modes` eigenfunctions on the grid points.
    pub fn build(
        problem: &SLProblem,
        spectrum: &SLSpectrum,
        grid: &Arc<Grid>,
        modes: usize,
    ) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::GridMismatch { context: "SLEigenTable::build" });
        }
        let ax = grid.axis(0);
        if ax.start() < problem.a - 1e-12 || ax.end() > problem.b + 1e-12 {
            return Err(Error::Domain {
                context: "SLEigenTable::build",
                message: "grid exceeds the problem interval".into(),
            });
        }
        let modes = modes.min(spectrum.len());
        let points: Vec<f64> = ax.points().collect();
        let r_weights: Vec<f64> =
            points.iter().enumerate().map(|(i, &x)| problem.r.eval(x) * ax.weight(i)).collect();
        let mut values = Vec::with_capacity(modes);
        let mut grid_norms_sq = Vec::with_capacity(modes);
        for j in 0..modes {
            let row = solve_w(problem, spectrum.lambdas[j], &points)?;
            let gn: f64 = row.iter().zip(&r_weights).map(|(v, w)| v * v * w).sum();
            grid_norms_sq.push(gn);
            values.push(row);
        }
        Ok(SLEigenTable {
            lambdas: spectrum.lambdas[..modes].to_vec(),
            norms_sq: spectrum.norms_sq[..modes].to_vec(),
            grid_norms_sq,
            values,
            points,
            r_weights,
        })
    }

    pub fn modes(&self) -> usize {
        self.lambdas.len()
    }
}

/// Geometric tail estimate for `Σ_{j≥len} e^{−λ_j t} M_j³/‖w_j‖²` from the
/// spectrum's last gaps (safety factor 4).
fn tail_estimate(spectrum: &SLSpectrum, t: f64) -> f64 {
    let n = spectrum.len();
    if n < 3 {
        return f64::INFINITY;
    }
    let last = (-spectrum.lambdas[n - 1] * t).exp() * spectrum.sup_bounds[n - 1].powi(3)
        / spectrum.norms_sq[n - 1];
    let gap = (spectrum.lambdas[n - 1] - spectrum.lambdas[n.saturating_sub(6).max(1)])
        / (n - 1 - n.saturating_sub(6).max(1)).max(1) as f64;
    let ratio = (-gap.max(1e-9) * t).exp().min(0.999);
    4.0 * last * ratio / (1.0 - ratio)
}

/// Triple kernel `q_t(x, y, ξ) = Σ_j e^{−tλ_j} w_j(x) w_j(y) w_j(ξ)/‖w_j‖²`
/// over the computed spectrum; errors when the truncation tail estimate
/// exceeds `tail_tol`. Fully symmetric under permutations of `(x, y, ξ)`.
pub fn kernel_q_sl(
    problem: &SLProblem,
    spectrum: &SLSpectrum,
    t: f64,
    x: f64,
    y: f64,
    xi: f64,
    tail_tol: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Parameter {
            context: "kernel_q_sl",
            message: format!("t = {t} must be positive"),
        });
    }
    let tail = tail_estimate(spectrum, t);
    if tail > tail_tol {
        return Err(Error::TailUnreachable {
            t,
            count: spectrum.len(),
            bound: tail,
            tolerance: tail_tol,
        });
    }
    let mut v = 0.0;
    for j in 0..spectrum.len() {
        let w = solve_w(problem, spectrum.lambdas[j], &[x, y, xi])?;
        let mut fs = [w[0], w[1], w[2]];
        fs.sort_by(f64::total_cmp);
        v += (-spectrum.lambdas[j] * t).exp() / spectrum.norms_sq[j] * (fs[0] * fs[1] * fs[2]);
    }
    Ok(v)
}

/// A product-formula measure with its convergence diagnostics.
#[derive(Debug, Clone)]
pub struct ProductMeasure {
    pub measure: DiscreteMeasure,
    /// `max_{j<j_check} |∫ w_j dν − w_j(x) w_j(y)|` at the returned iterate.
    pub residual: f64,
    pub t_used: f64,
    /// `(t, residual)` along the monitored schedule.
    pub trace: Vec<(f64, f64)>,
    /// Mass in negative weights of the returned iterate (≤ 0).
    pub negative_mass: f64,
    /// True when the negativity exceeds the clip budget: a grid-level
    /// positivity failure — a finding, not an error.
    pub positivity_failure: bool,
}

/// Default monitored schedule `0.1·2^{−i}`, `i = 0..=10`.
pub fn default_t_schedule() -> Vec<f64> {
    (0..=10).map(|i| 0.1 * 0.5_f64.powi(i)).collect()
}

/// Walks the decreasing schedule, keeping the latest iterate whose
/// residual has not strictly increased (plateaus advance the iterate:
/// smaller `t` sharpens the measure at equal residual). Stops at the first
/// genuine increase.
fn walk_schedule(
    table: &SLEigenTable,
    wx: &[f64],
    wy: &[f64],
    t_schedule: &[f64],
    trace: Option<&mut Vec<(f64, f64)>>,
) -> (f64, Vec<f64>, f64) {
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut trace = trace;
    for &t in t_schedule {
        let (weights, residual) = product_row(table, wx, wy, t);
        if let Some(tr) = trace.as_deref_mut() {
            tr.push((t, residual));
        }
        match &best {
            Some((r, _, _)) if residual > r * (1.0 + 1e-9) + 1e-300 => break,
            _ => best = Some((residual, weights, t)),
        }
    }
    best.expect("nonempty schedule")
}

fn product_row(
    table: &SLEigenTable,
    wx: &[f64],
    wy: &[f64],
    t: f64,
) -> (Vec<f64>, f64) {
    let n = table.points.len();
    let modes = table.modes();
    let mut weights = vec![0.0; n];
    for j in 0..modes {
        let c = (-table.lambdas[j] * t).exp() * (wx[j] * wy[j]) / table.grid_norms_sq[j];
        for (i, w) in weights.iter_mut().enumerate() {
            *w += c * table.values[j][i] * table.r_weights[i];
        }
    }
    // product-formula residual over the leading modes
    let j_check = modes.min(10);
    let mut residual = 0.0_f64;
    for j in 0..j_check {
        let integral: f64 =
            table.values[j].iter().zip(&weights).map(|(v, w)| v * w).sum();
        residual = residual.max((integral - wx[j] * wy[j]).abs());
    }
    (weights, residual)
}

/// Product-formula measure `ν_{x,y}` on the grid: discretizes
/// `ν_{t,x,y}(dξ) = q_t(x,y,ξ) r(ξ)dξ` with the grid-quadrature spectral
/// closure and walks the decreasing `t` schedule until the product-formula
/// residual stops improving, returning the best iterate.
pub fn product_measure(
    problem: &SLProblem,
    spectrum: &SLSpectrum,
    x: f64,
    y: f64,
    grid: &Arc<Grid>,
    t_schedule: &[f64],
) -> Result<ProductMeasure> {
    if t_schedule.is_empty() || t_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parameter {
            context: "product_measure",
            message: "t_schedule must be nonempty and strictly decreasing".into(),
        });
    }
    let modes = spectrum.len().min(grid.len());
    let table = SLEigenTable::build(problem, spectrum, grid, modes)?;
    let mut wx = Vec::with_capacity(modes);
    let mut wy = Vec::with_capacity(modes);
    for j in 0..modes {
        let w = solve_w(problem, spectrum.lambdas[j], &[x, y])?;
        wx.push(w[0]);
        wy.push(w[1]);
    }

    let mut trace = Vec::with_capacity(t_schedule.len());
    let (residual, weights, t_used) =
        walk_schedule(&table, &wx, &wy, t_schedule, Some(&mut trace));
    let measure = DiscreteMeasure::new(grid.clone(), weights);
    let negative_mass = measure.negative_mass();
    Ok(ProductMeasure {
        measure,
        residual,
        t_used,
        trace,
        negative_mass,
        positivity_failure: -negative_mass > CLIP_BUDGET,
    })
}

/// Outcome of assembling a full convolution table from product measures.
#[derive(Debug)]
pub enum SLConvolutionBuild {
    Built {
        table: ConvolutionTable,
        /// Worst product-formula residual over all rows.
        max_residual: f64,
        /// Largest clipped negative mass over all rows.
        max_clipped: f64,
    },
    /// Some row's negativity exceeded the clip budget: the positivity
    /// hypothesis fails at grid level and no algebra is constructed.
    PositivityFailure {
        row: (usize, usize),
        negative_mass: f64,
        residual: f64,
    },
}

/// Builds the convolution table `ν_{x_i,x_j}` for all grid pairs from the
/// monitored `t ↓ 0` limit, applying the recorded-clip policy.
pub fn convolution_table(
    problem: &SLProblem,
    spectrum: &SLSpectrum,
    grid: &Arc<Grid>,
    t_schedule: &[f64],
) -> Result<SLConvolutionBuild> {
    let modes = spectrum.len().min(grid.len());
    let table = SLEigenTable::build(problem, spectrum, grid, modes)?;
    let n = grid.len();
    let mut max_residual = 0.0_f64;
    let mut max_clipped = 0.0_f64;
    let mut rows: Vec<SparseRow> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        let wx: Vec<f64> = (0..modes).map(|j| table.values[j][i]).collect();
        for k in i..n {
            // identity rows are δ_x structurally (δ_a is the algebra
            // identity); only genuine product rows face the clip policy
            if i == 0 || k == 0 {
                rows.push(vec![(i.max(k) as u32, 1.0)]);
                continue;
            }
            let wy: Vec<f64> = (0..modes).map(|j| table.values[j][k]).collect();
            let (residual, weights, _) = walk_schedule(&table, &wx, &wy, t_schedule, None);
            max_residual = max_residual.max(residual);
            let m = DiscreteMeasure::new(grid.clone(), weights);
            let neg = -m.negative_mass();
            if neg > CLIP_BUDGET {
                return Ok(SLConvolutionBuild::PositivityFailure {
                    row: (i, k),
                    negative_mass: -neg,
                    residual,
                });
            }
            let (clipped, amount) = m.clipped_nonnegative();
            max_clipped = max_clipped.max(amount);
            let row: SparseRow = clipped
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, w)| w.abs() > 1e-13)
                .map(|(idx, w)| (idx as u32, *w))
                .collect();
            // renormalize the sparsified row to unit mass
            let mass: f64 = row.iter().map(|(_, w)| *w).sum();
            let row: SparseRow =
                row.into_iter().map(|(idx, w)| (idx, w / mass)).collect();
            rows.push(row);
        }
    }
    let mut it = rows.into_iter();
    let built = ConvolutionTable::from_rows(grid.clone(), 0, move |_i, _j| {
        Ok(it.next().expect("row count matches"))
    })?;
    Ok(SLConvolutionBuild::Built { table: built, max_residual, max_clipped })
}
