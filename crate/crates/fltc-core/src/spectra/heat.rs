//! Heat-kernel and product-formula kernel partial sums with tail control.
//!
//! `p_t(x,y) = Σ_j e^{−λ_j t} φ_j(x) φ_j(y) / ‖φ_j‖²` is invariant under
//! rescaling of the eigenfunctions, so it is available on every domain.
//! The triple kernel `q_t(x,y,ξ) = Σ_j e^{−λ_j t} φ_j(x) φ_j(y) φ_j(ξ) / ‖φ_j‖²`
//! is not scale-invariant: it requires the max-normalized family with
//! `φ_j(a) = 1`, which exists here only on the rectangle (corner `a = 0`).
//! Rectangle truncation tails are bounded rigorously through per-axis theta
//! sums; circular domains use the computed buffer modes plus a geometric
//! remainder estimate.

use rayon::prelude::*;
use serde::Serialize;

use super::Spectrum;
use crate::domains::DomainSpec;
use crate::error::{Error, Result};

/// A kernel value together with the truncation tail bound that certifies it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelEval {
    pub value: f64,
    pub tail_bound: f64,
}

/// Result of an exhaustive grid minimization of the truncated `q_t`.
#[derive(Debug, Clone, Serialize)]
pub struct PositivityScan {
    pub min_value: f64,
    pub argmin: (Vec<f64>, Vec<f64>, Vec<f64>),
    /// Truncation tail bound; a minimum below `−tail_bound` certifies a
    /// grid-level positivity failure.
    pub tail_bound: f64,
    pub grid_points: usize,
    pub t: f64,
    pub modes: usize,
}

/// Upper bound on `Σ_{j=1..∞} e^{−a j²}` via a finite sum and the Gaussian
/// integral remainder `∫_K^∞ e^{−a x²} dx ≤ e^{−aK²}/(2aK)`.
pub(crate) fn theta_tail_sum(a: f64) -> f64 {
    let mut s = 0.0;
    let mut k = 1u64;
    loop {
        let term = (-a * (k * k) as f64).exp();
        s += term;
        if term < 1e-300 || k > 100_000 {
            break;
        }
        k += 1;
    }
    s + (-a * (k * k) as f64).exp() / (2.0 * a * k as f64)
}

impl Spectrum {
    /// Rigorous (rectangle) or buffer-estimated (circular) upper bound on
    /// the truncation tail `Σ_{j>count} e^{−λ_j t} M_j^p / ‖φ_j‖²`, where
    /// `M_j` bounds `sup|φ_j|` and `p` is the number of eigenfunction
    /// factors in the kernel (2 for `p_t`, 3 for `q_t`).
    pub fn tail_bound(&self, t: f64, count: usize, p: u32) -> Result<f64> {
        if count == 0 || count > self.pairs().len() {
            return Err(Error::Parameter {
                context: "tail_bound",
                message: format!("count = {count} not in 1..={}", self.pairs().len()),
            });
        }
        match self.domain() {
            DomainSpec::Rectangle { betas } => {
                // sup|φ_j| = 1 exactly, so M^p = 1 and the full-lattice sum
                // factorizes into per-axis theta functions
                let mut full = 1.0;
                for &b in betas {
                    let a = std::f64::consts::PI * std::f64::consts::PI * t / (b * b);
                    full *= (1.0 + 2.0 * theta_tail_sum(a)) / b;
                }
                let included: f64 = self.pairs()[..count]
                    .iter()
                    .map(|q| (-q.lambda * t).exp() / q.l2_norm_sq)
                    .sum();
                Ok((full - included).max(0.0) + 32.0 * f64::EPSILON * full)
            }
            _ => {
                let rest = &self.pairs()[count..];
                if rest.len() < 8 {
                    return Err(Error::Parameter {
                        context: "tail_bound",
                        message: format!(
                            "circular-domain tail estimate needs ≥ 8 buffer modes beyond count, \
                             spectrum has {} (build a larger spectrum)",
                            rest.len()
                        ),
                    });
                }
                let term = |q: &super::EigenPair| {
                    (-q.lambda * t).exp() * q.sup_norm.powi(p as i32) / q.l2_norm_sq
                };
                let buffer: f64 = rest.iter().map(term).sum();
                // geometric remainder from the mean eigenvalue gap over the
                // last buffer modes; safety factor 4 (estimate, not a proof)
                let tailpairs = &rest[rest.len().saturating_sub(16)..];
                let gap = (tailpairs.last().unwrap().lambda - tailpairs[0].lambda)
                    / (tailpairs.len() - 1) as f64;
                let ratio = (-gap.max(1e-6) * t).exp().min(0.999);
                let last = term(rest.last().unwrap());
                Ok(buffer + 4.0 * last * ratio / (1.0 - ratio))
            }
        }
    }

    /// Truncated Neumann heat kernel `p_t(x, y)` using the first `count`
    /// modes; errors when the tail bound exceeds `tail_tol`.
    ///
    /// Symmetric in `(x, y)` exactly by construction.
    pub fn heat_kernel(
        &self,
        t: f64,
        x: &[f64],
        y: &[f64],
        count: usize,
        tail_tol: f64,
    ) -> Result<KernelEval> {
        let tail = self.tail_bound(t, count, 2)?;
        if tail > tail_tol {
            return Err(Error::TailUnreachable { t, count, bound: tail, tolerance: tail_tol });
        }
        let mut v = 0.0;
        for j in 0..count {
            let p = &self.pairs()[j];
            // the φ(x)·φ(y) product is formed first so that swapping the
            // arguments gives bit-identical values
            v += (-p.lambda * t).exp() / p.l2_norm_sq * (self.eval(j, x)? * self.eval(j, y)?);
        }
        Ok(KernelEval { value: v, tail_bound: tail })
    }

    fn require_rectangle(&self, context: &'static str) -> Result<()> {
        if matches!(self.domain(), DomainSpec::Rectangle { .. }) {
            Ok(())
        } else {
            Err(Error::Parameter {
                context,
                message: "the triple kernel needs the max-normalized family φ_j(a) = 1, \
                          which exists only on the rectangle (no common maximizer elsewhere)"
                    .into(),
            })
        }
    }

    /// Truncated product-formula kernel `q_t(x, y, ξ)` on the rectangle in
    /// the max-normalized family (`φ_j(0) = 1`). Fully symmetric under
    /// permutations of its three point arguments by construction.
    pub fn kernel_q(
        &self,
        t: f64,
        x: &[f64],
        y: &[f64],
        xi: &[f64],
        count: usize,
        tail_tol: f64,
    ) -> Result<KernelEval> {
        self.require_rectangle("kernel_q")?;
        let tail = self.tail_bound(t, count, 3)?;
        if tail > tail_tol {
            return Err(Error::TailUnreachable { t, count, bound: tail, tolerance: tail_tol });
        }
        let mut v = 0.0;
        for j in 0..count {
            let p = &self.pairs()[j];
            // multiply the three point factors in a canonical order so the
            // sum is bit-identical under argument permutations
            let mut fs = [self.eval(j, x)?, self.eval(j, y)?, self.eval(j, xi)?];
            fs.sort_by(f64::total_cmp);
            v += (-p.lambda * t).exp() / p.l2_norm_sq * (fs[0] * fs[1] * fs[2]);
        }
        Ok(KernelEval { value: v, tail_bound: tail })
    }

    /// Exact minimum of the truncated `q_t` over the cube of a tensor grid
    /// with `grid_n` points per axis, with the tail bound reported so a
    /// minimum below `−tail_bound` certifies positivity failure.
    pub fn positivity_scan(&self, t: f64, grid_n: usize, count: usize) -> Result<PositivityScan> {
        self.require_rectangle("positivity_scan")?;
        let points: Vec<Vec<f64>> =
            self.domain().sample_points(grid_n).into_iter().map(|(xy, _)| xy).collect();
        let g = points.len();
        if g > 80 {
            return Err(Error::Parameter {
                context: "positivity_scan",
                message: format!("grid of {g} points exceeds the 80-point scan budget (grid³ enumerable)"),
            });
        }
        let tail = self.tail_bound(t, count, 3)?;

        // mode values on the scan grid; `modes` folds e^{−λt}/‖φ‖² into
        // the x-factor so the inner loop is a plain triple product
        let count = count.min(self.pairs().len());
        let mut raw = vec![vec![0.0; g]; count];
        for (j, row) in raw.iter_mut().enumerate() {
            for (i, pt) in points.iter().enumerate() {
                row[i] = self.eval(j, pt)?;
            }
        }
        let modes: Vec<Vec<f64>> = raw
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let coef = (-self.pairs()[j].lambda * t).exp() / self.pairs()[j].l2_norm_sq;
                row.iter().map(|v| coef * v).collect()
            })
            .collect();

        let best = (0..g)
            .into_par_iter()
            .map(|ix| {
                let mut local = (f64::INFINITY, ix, 0usize, 0usize);
                for iy in 0..g {
                    // partial products φ_j(x)·φ_j(y)·coef_j
                    let mut pxy = vec![0.0; count];
                    for (j, p) in pxy.iter_mut().enumerate() {
                        *p = modes[j][ix] * raw[j][iy];
                    }
                    #[allow(clippy::needless_range_loop)]
                    for ixi in 0..g {
                        let mut v = 0.0;
                        for (j, p) in pxy.iter().enumerate() {
                            v += p * raw[j][ixi];
                        }
                        if v < local.0 {
                            local = (v, ix, iy, ixi);
                        }
                    }
                }
                local
            })
            .reduce(
                || (f64::INFINITY, 0, 0, 0),
                |a, b| {
                    if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2, b.3) < (a.1, a.2, a.3)) {
                        b
                    } else {
                        a
                    }
                },
            );

        Ok(PositivityScan {
            min_value: best.0,
            argmin: (points[best.1].clone(), points[best.2].clone(), points[best.3].clone()),
            tail_bound: tail,
            grid_points: g,
            t,
            modes: count,
        })
    }
}
