//! The axiom suite: per-axiom maximum deviations of a discrete convolution
//! algebra from the defining conditions of a Feller-Lévy trivializable
//! convolution. Deviations are findings, not failures — the caller decides
//! what is acceptable.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ConvolutionTable, DiscreteMeasure, TrivializingFamily};
use crate::error::Result;

/// Everything the axiom checker consumes.
pub struct AxiomInputs<'a, F>
where
    F: Fn(f64, usize) -> Result<DiscreteMeasure>,
{
    pub table: &'a ConvolutionTable,
    pub family: &'a TrivializingFamily,
    /// `(t, γ_t)` rows of the convolution semigroup. Every pairwise sum
    /// `t + s` that also appears in the list is tested for
    /// `γ_{t+s} = γ_t ⋄ γ_s`.
    pub semigroup: &'a [(f64, DiscreteMeasure)],
    /// Discretized transition kernel `p_{t,x}` for the semigroup times.
    pub transition_oracle: F,
    pub random_trials: usize,
    pub seed: u64,
}

/// Maximum deviations per axiom.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    /// I: `‖μ⋄ν − ν⋄μ‖` over random signed pairs.
    pub commutativity: f64,
    /// I: `‖(δ_x⋄δ_y)⋄δ_z − δ_x⋄(δ_y⋄δ_z)‖` over random triples.
    pub associativity: f64,
    /// I: `‖ν_{x,a} − δ_x‖` over all grid points.
    pub identity: f64,
    /// II: worst of `|mass − 1|` and negative mass over random
    /// probability convolutions.
    pub probability_closure: f64,
    /// III: `max_j |(μ⋄ν)(φ_j) − μ(φ_j)·ν(φ_j)|` over random pairs.
    pub trivialization: f64,
    /// III (injectivity proxy): numerical rank of `Φ·diag(w)`.
    pub injectivity_rank: usize,
    /// `min(J, G) − rank`.
    pub injectivity_slack: usize,
    /// IV: `‖γ_{t+s} − γ_t ⋄ γ_s‖` over listed time pairs.
    pub semigroup: f64,
    /// IV: `‖p_{t,x} − γ_t ⋄ δ_x‖` over listed times and sampled points.
    pub transition: f64,
    /// Largest of all deviation entries.
    pub max_deviation: f64,
}

fn random_signed(grid: &std::sync::Arc<crate::grid::Grid>, rng: &mut ChaCha8Rng) -> DiscreteMeasure {
    let mut w = vec![0.0; grid.len()];
    for _ in 0..5 {
        let i = rng.gen_range(0..grid.len());
        w[i] += rng.gen_range(-1.0..1.0);
    }
    DiscreteMeasure::new(grid.clone(), w)
}

fn random_probability(
    grid: &std::sync::Arc<crate::grid::Grid>,
    rng: &mut ChaCha8Rng,
) -> DiscreteMeasure {
    let mut w = vec![0.0; grid.len()];
    let mut total = 0.0;
    for _ in 0..6 {
        let i = rng.gen_range(0..grid.len());
        let v: f64 = rng.gen_range(0.01..1.0);
        w[i] += v;
        total += v;
    }
    for v in &mut w {
        *v /= total;
    }
    DiscreteMeasure::new(grid.clone(), w)
}

/// Runs the whole suite and reports per-axiom maximum deviations.
pub fn check_fltc_axioms<F>(inputs: AxiomInputs<'_, F>) -> Result<AxiomReport>
where
    F: Fn(f64, usize) -> Result<DiscreteMeasure>,
{
    let table = inputs.table;
    let family = inputs.family;
    let grid = table.grid().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(inputs.seed);
    let trials = inputs.random_trials.max(1);

    // I: commutativity on random signed pairs
    let mut commutativity = 0.0_f64;
    let mut trivialization = 0.0_f64;
    let mut probability_closure = 0.0_f64;
    for _ in 0..trials {
        let mu = random_signed(&grid, &mut rng);
        let nu = random_signed(&grid, &mut rng);
        let ab = table.convolve(&mu, &nu)?;
        let ba = table.convolve(&nu, &mu)?;
        commutativity = commutativity.max(ab.tv_distance(&ba)?);

        let f_ab = family.trivialize(&ab);
        let f_mu = family.trivialize(&mu);
        let f_nu = family.trivialize(&nu);
        for j in 0..family.len() {
            trivialization = trivialization.max((f_ab[j] - f_mu[j] * f_nu[j]).abs());
        }

        let p = random_probability(&grid, &mut rng);
        let q = random_probability(&grid, &mut rng);
        let pq = table.convolve(&p, &q)?;
        probability_closure = probability_closure
            .max((pq.mass() - 1.0).abs())
            .max((-pq.min_weight()).max(0.0));
    }

    // I: associativity on random δ-triples
    let mut associativity = 0.0_f64;
    for _ in 0..trials {
        let x = DiscreteMeasure::dirac(grid.clone(), rng.gen_range(0..grid.len()));
        let y = DiscreteMeasure::dirac(grid.clone(), rng.gen_range(0..grid.len()));
        let z = DiscreteMeasure::dirac(grid.clone(), rng.gen_range(0..grid.len()));
        let left = table.convolve(&table.convolve(&x, &y)?, &z)?;
        let right = table.convolve(&x, &table.convolve(&y, &z)?)?;
        associativity = associativity.max(left.tv_distance(&right)?);
    }

    // I: identity row
    let mut identity = 0.0_f64;
    for x in 0..grid.len() {
        let dx = DiscreteMeasure::dirac(grid.clone(), x);
        let out = table.convolve(&dx, &table.identity_measure())?;
        identity = identity.max(out.tv_distance(&dx)?);
    }

    // III: injectivity proxy — numerical rank of Φ·diag(w)
    let weights = grid.weights();
    let jdim = family.len();
    let gdim = grid.len();
    let mut mat = DMatrix::<f64>::zeros(jdim, gdim);
    for j in 0..jdim {
        for i in 0..gdim {
            mat[(j, i)] = family.values(j)[i] * weights[i];
        }
    }
    let svd = mat.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = smax * (jdim.max(gdim) as f64) * f64::EPSILON * 8.0;
    let injectivity_rank = svd.singular_values.iter().filter(|s| **s > thresh).count();
    let injectivity_slack = jdim.min(gdim).saturating_sub(injectivity_rank);

    // IV: semigroup property on listed time pairs
    let mut semigroup = 0.0_f64;
    for (t, gamma_t) in inputs.semigroup {
        for (s, gamma_s) in inputs.semigroup {
            let target = inputs
                .semigroup
                .iter()
                .find(|(u, _)| (u - (t + s)).abs() < 1e-12);
            if let Some((_, gamma_ts)) = target {
                let conv = table.convolve(gamma_t, gamma_s)?;
                semigroup = semigroup.max(conv.tv_distance(gamma_ts)?);
            }
        }
    }

    // IV: transition kernel representation p_{t,x} = γ_t ⋄ δ_x
    let mut transition = 0.0_f64;
    let sample: Vec<usize> = (0..grid.len().min(25))
        .map(|_| rng.gen_range(0..grid.len()))
        .collect();
    for (t, gamma_t) in inputs.semigroup {
        for &x in &sample {
            let oracle = (inputs.transition_oracle)(*t, x)?;
            let dx = DiscreteMeasure::dirac(grid.clone(), x);
            let conv = table.convolve(gamma_t, &dx)?;
            transition = transition.max(conv.tv_distance(&oracle)?);
        }
    }

    let max_deviation = [
        commutativity,
        associativity,
        identity,
        probability_closure,
        trivialization,
        semigroup,
        transition,
    ]
    .into_iter()
    .fold(0.0, f64::max);

    Ok(AxiomReport {
        commutativity,
        associativity,
        identity,
        probability_closure,
        trivialization,
        injectivity_rank,
        injectivity_slack,
        semigroup,
        transition,
        max_deviation,
    })
}
