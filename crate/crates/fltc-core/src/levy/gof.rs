//! Chi-square goodness-of-fit for sampled grid distributions.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Cells kept after pooling low-expectation cells.
    pub cells: usize,
}

/// Pearson chi-square test of observed counts against expected
/// probabilities. Cells with expected count below 5 are pooled into one
/// bucket so the asymptotic distribution is trustworthy.
pub fn chi_square_gof(observed: &[u64], expected_probs: &[f64], n: u64) -> Result<GofReport> {
    if observed.len() != expected_probs.len() || observed.is_empty() {
        return Err(Error::Parameter {
            context: "chi_square_gof",
            message: "observed and expected must have equal nonzero length".into(),
        });
    }
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        let e = p.max(0.0) * n as f64;
        if e < 5.0 {
            pooled_obs += o as f64;
            pooled_exp += e;
        } else {
            statistic += (o as f64 - e) * (o as f64 - e) / e;
            cells += 1;
        }
    }
    if pooled_exp > 0.0 {
        statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        cells += 1;
    }
    if cells < 2 {
        return Err(Error::Parameter {
            context: "chi_square_gof",
            message: "fewer than two usable cells after pooling".into(),
        });
    }
    let dof = cells - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Parameter {
        context: "chi_square_gof",
        message: format!("chi-square setup: {e}"),
    })?;
    Ok(GofReport { statistic, dof, p_value: 1.0 - dist.cdf(statistic), cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn uniform_samples_fit_uniform() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let k = 10;
        let n = 100_000u64;
        let mut counts = vec![0u64; k];
        for _ in 0..n {
            counts[rng.gen_range(0..k)] += 1;
        }
        let probs = vec![1.0 / k as f64; k];
        let rep = chi_square_gof(&counts, &probs, n).unwrap();
        assert_eq!(rep.dof, k - 1);
        assert!(rep.p_value > 0.01, "p = {}", rep.p_value);
    }

    #[test]
    fn wrong_distribution_is_rejected() {
        let counts = vec![5000u64, 5000];
        let probs = vec![0.8, 0.2];
        let rep = chi_square_gof(&counts, &probs, 10_000).unwrap();
        assert!(rep.p_value < 1e-6);
    }
}
