//! Algebra-level checks built on the convolution table.

use super::{ConvolutionTable, DiscreteMeasure, TrivializingFamily, NEG_TOL};
use crate::error::{Error, Result};

/// Compares the trivializing integrals of the ⋄-Poisson measure `e(ν)`
/// against the exponent formula `exp(∫(φ_j − 1) dν)` (pure-Poisson branch
/// of the Lévy-Khintchine representation, the Gaussian factor being `δ_a`).
/// Returns the maximum absolute error over the family.
pub fn levy_khintchine_check(
    table: &ConvolutionTable,
    family: &TrivializingFamily,
    nu: &DiscreteMeasure,
) -> Result<f64> {
    if let Some((i, w)) = nu.weights().iter().enumerate().find(|(_, w)| **w < -NEG_TOL) {
        return Err(Error::SignedInput { context: "levy_khintchine_check", weight: *w, index: i });
    }
    if nu.weights()[table.identity_index()].abs() > NEG_TOL {
        return Err(Error::Parameter {
            context: "levy_khintchine_check",
            message: "jump measure must not charge the identity point".into(),
        });
    }
    let e_nu = table.poisson(nu)?;
    let lhs = family.trivialize(&e_nu);
    let mut max_err = 0.0_f64;
    for (j, l) in lhs.iter().enumerate() {
        let phi = family.values(j);
        let integral: f64 = nu
            .weights()
            .iter()
            .zip(phi)
            .map(|(w, v)| w * (v - 1.0))
            .sum();
        let rhs = integral.exp();
        max_err = max_err.max((l - rhs).abs());
    }
    Ok(max_err)
}

/// Maximum total-variation deviation of `δ_x ⋄ m` from `m` over all grid
/// points `x` (invariance of the symmetrizing measure).
pub fn invariance_check(table: &ConvolutionTable, m: &DiscreteMeasure) -> Result<f64> {
    let grid = table.grid().clone();
    let mut worst = 0.0_f64;
    for x in 0..grid.len() {
        let dx = DiscreteMeasure::dirac(grid.clone(), x);
        let pushed = table.convolve(&dx, m)?;
        worst = worst.max(pushed.tv_distance(m)?);
    }
    Ok(worst)
}
