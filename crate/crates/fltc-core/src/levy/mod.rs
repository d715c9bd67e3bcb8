//! Simulation of ⋄-Lévy processes: Markov chains with transition kernel
//! `p_{t,x} = γ_t ⋄ δ_x`, with Monte Carlo verification of the eigenfunction
//! martingale characterizations.

mod gof;

pub use gof::{chi_square_gof, GofReport};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{
    ConvolutionTable, DiscreteMeasure, RectangleSemigroup, TrivializingFamily, NEG_TOL,
};

/// One simulated trajectory on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct PathSample {
    pub times: Vec<f64>,
    /// Grid indices `X_{t_i}`.
    pub states: Vec<usize>,
    pub seed: u64,
    pub stream: u64,
}

/// How the convolution semigroup `γ_t` is generated: the diffusion itself
/// (heat-kernel rows at the identity point) or the pure-jump ⋄-Poisson
/// construction `γ_t = e(t·ν)`.
pub enum SemigroupSpec {
    Heat(RectangleSemigroup),
    Poisson { jump: DiscreteMeasure },
}

impl SemigroupSpec {
    pub fn gamma(&self, table: &ConvolutionTable, t: f64) -> Result<DiscreteMeasure> {
        match self {
            SemigroupSpec::Heat(sg) => sg.gamma(t),
            SemigroupSpec::Poisson { jump } => table.poisson(&jump.scaled(t)),
        }
    }

    /// Lévy exponent `ψ_j = −log γ_1(φ_j)`, so that `e^{tψ_j} φ_j(X_t)` is
    /// a martingale. For the jump construction this is evaluated through
    /// the Poisson exponent identity `ψ_j = ‖ν‖ − ν(φ_j)` rather than the
    /// series. For the diffusion, `γ_1(φ_j)` can sit below the quadrature
    /// noise floor for fast modes; the semigroup property lets the same
    /// exponent be read off a shorter time, `ψ_j = −log γ_Δ(φ_j)/Δ`.
    pub fn psi(
        &self,
        table: &ConvolutionTable,
        family: &TrivializingFamily,
        j: usize,
    ) -> Result<f64> {
        match self {
            SemigroupSpec::Heat(_) => {
                let mut dt = 1.0;
                loop {
                    let g = self.gamma(table, dt)?;
                    let v = g.integrate(family.values(j));
                    if v > 1e-6 {
                        return Ok(-v.ln() / dt);
                    }
                    if dt <= 0.02 {
                        return Err(Error::Parameter {
                            context: "SemigroupSpec::psi",
                            message: format!(
                                "γ_t(φ_{j}) = {v} is below the noise floor even at t = {dt}"
                            ),
                        });
                    }
                    dt *= 0.25;
                }
            }
            SemigroupSpec::Poisson { jump } => {
                Ok(jump.mass() - jump.integrate(family.values(j)))
            }
        }
    }
}

/// Cached one-step transition rows `γ_t ⋄ δ_x` with cumulative sums for
/// inverse-CDF sampling.
pub struct TransitionKernel {
    pub t_step: f64,
    rows: Vec<Vec<f64>>,
    cdf: Vec<Vec<f64>>,
}

impl TransitionKernel {
    pub fn build(table: &ConvolutionTable, spec: &SemigroupSpec, t_step: f64) -> Result<Self> {
        if !(t_step > 0.0) {
            return Err(Error::Parameter {
                context: "TransitionKernel::build",
                message: format!("t_step = {t_step} must be positive"),
            });
        }
        let gamma = spec.gamma(table, t_step)?;
        let grid = table.grid().clone();
        let n = grid.len();
        let mut rows = Vec::with_capacity(n);
        let mut cdf = Vec::with_capacity(n);
        for x in 0..n {
            let dx = DiscreteMeasure::dirac(grid.clone(), x);
            let row = table.convolve(&gamma, &dx)?;
            if row.min_weight() < -NEG_TOL || (row.mass() - 1.0).abs() > 1e-10 {
                return Err(Error::NonProbabilityRow {
                    context: "TransitionKernel::build",
                    mass: row.mass(),
                    min_weight: row.min_weight(),
                });
            }
            let mut acc = 0.0;
            let mut c = Vec::with_capacity(n);
            for &w in row.weights() {
                acc += w.max(0.0);
                c.push(acc);
            }
            // exact top so inverse-CDF can never run off the end
            if let Some(last) = c.last_mut() {
                *last = f64::INFINITY;
            }
            rows.push(row.weights().to_vec());
            cdf.push(c);
        }
        Ok(TransitionKernel { t_step, rows, cdf })
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x]
    }

    /// Samples the next state from `γ_t ⋄ δ_x` by inverse CDF.
    pub fn sample<R: Rng>(&self, x: usize, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf[x].partition_point(|&c| c < u)
    }
}

/// One transition step (convenience wrapper over a throwaway kernel; use
/// [`TransitionKernel`] directly for repeated sampling).
pub fn transition(
    table: &ConvolutionTable,
    spec: &SemigroupSpec,
    t_step: f64,
    x: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    Ok(TransitionKernel::build(table, spec, t_step)?.sample(x, rng))
}

fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Simulates one path of the ⋄-Lévy chain: `n_steps` equal steps to the
/// horizon. Deterministic in `(seed, stream)`.
pub fn simulate_path(
    kernel: &TransitionKernel,
    horizon: f64,
    n_steps: usize,
    x0: usize,
    seed: u64,
    stream: u64,
) -> PathSample {
    debug_assert!(n_steps >= 1);
    let mut rng = path_rng(seed, stream);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut times = Vec::with_capacity(n_steps + 1);
    states.push(x0);
    times.push(0.0);
    let mut x = x0;
    for i in 1..=n_steps {
        if horizon > 0.0 {
            x = kernel.sample(x, &mut rng);
        }
        states.push(x);
        times.push(horizon * i as f64 / n_steps as f64);
    }
    PathSample { times, states, seed, stream }
}

/// Simulates an ensemble with independent per-path streams and returns the
/// terminal states. Embarrassingly parallel and deterministic in the seed.
pub fn simulate_terminal_ensemble(
    kernel: &TransitionKernel,
    n_steps: usize,
    x0: usize,
    seed: u64,
    n_paths: usize,
) -> Vec<usize> {
    (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p as u64);
            let mut x = x0;
            for _ in 0..n_steps {
                x = kernel.sample(x, &mut rng);
            }
            x
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MartingaleReport {
    pub j: usize,
    pub t: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub target: f64,
    pub psi: f64,
    pub pass: bool,
}

/// Monte Carlo check of the martingale characterization:
/// `E[e^{ψ_j t} φ_j(X_t) | X_0 = x_0] = φ_j(x_0)` at 4 standard errors.
#[allow(clippy::too_many_arguments)]
pub fn martingale_check(
    table: &ConvolutionTable,
    spec: &SemigroupSpec,
    family: &TrivializingFamily,
    j: usize,
    x0: usize,
    t: f64,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<MartingaleReport> {
    if n_samples < 10_000 {
        return Err(Error::Parameter {
            context: "martingale_check",
            message: format!("n_samples = {n_samples} below the 10^4 floor"),
        });
    }
    let psi = spec.psi(table, family, j)?;
    let kernel = TransitionKernel::build(table, spec, t / n_steps as f64)?;
    let phi = family.values(j);
    let growth = (psi * t).exp();
    let samples: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p as u64);
            let mut x = x0;
            for _ in 0..n_steps {
                x = kernel.sample(x, &mut rng);
            }
            growth * phi[x]
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    let target = phi[x0];
    Ok(MartingaleReport {
        j,
        t,
        estimate: mean,
        stderr,
        target,
        psi,
        pass: (mean - target).abs() <= 4.0 * stderr + 1e-12,
    })
}

/// The Feller operator `(T^ν f)(x) = ∫ f d(ν ⋄ δ_x)` on grid functions:
/// positivity-preserving, conservative (`𝟙 ↦ 𝟙`), sup-norm contraction.
pub fn feller_operator(
    table: &ConvolutionTable,
    nu: &DiscreteMeasure,
    f: &[f64],
) -> Result<Vec<f64>> {
    if !nu.is_probability() {
        return Err(Error::NonProbabilityRow {
            context: "feller_operator",
            mass: nu.mass(),
            min_weight: nu.min_weight(),
        });
    }
    let grid = table.grid().clone();
    if f.len() != grid.len() {
        return Err(Error::GridMismatch { context: "feller_operator" });
    }
    let mut out = Vec::with_capacity(grid.len());
    for x in 0..grid.len() {
        let dx = DiscreteMeasure::dirac(grid.clone(), x);
        let row = table.convolve(nu, &dx)?;
        out.push(row.integrate(f));
    }
    Ok(out)
}
