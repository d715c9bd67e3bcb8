//! Discretized heat-kernel semigroup rows on the rectangle.
//!
//! `γ_t` is the trapezoid discretization of `p_t(a, ·)` with per-axis mode
//! caps below the grid Nyquist index, so the discrete algebra identities
//! `γ_{t+s} = γ_t ⋄ γ_s` and `p_{t,x} = γ_t ⋄ δ_x` hold to rounding.

use std::sync::Arc;

use super::{DiscreteMeasure, CLIP_BUDGET};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectra::rectangle::{tensor_heat_row, tensor_tail_bound};

/// Heat semigroup of the rectangle discretized on a tensor grid.
#[derive(Debug, Clone)]
pub struct RectangleSemigroup {
    betas: Vec<f64>,
    grid: Arc<Grid>,
    caps: Vec<u32>,
}

impl RectangleSemigroup {
    /// Caps default to `n−2` per axis: the largest index block that is
    /// exactly orthogonal under the trapezoid weights.
    pub fn new(betas: &[f64], grid: Arc<Grid>) -> Result<Self> {
        if grid.dim() != betas.len() {
            return Err(Error::GridMismatch { context: "RectangleSemigroup::new" });
        }
        let caps: Vec<u32> = grid.axes().iter().map(|ax| (ax.len() - 2) as u32).collect();
        Ok(RectangleSemigroup { betas: betas.to_vec(), grid, caps })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn tail_bound(&self, t: f64) -> f64 {
        tensor_tail_bound(&self.betas, &self.caps, t)
    }

    /// Discretized transition row `p_{t,x}` as a probability measure; at
    /// `t = 0` this is the Dirac `δ_x` by definition.
    /// Negative discretization mass within the clip budget is clipped and
    /// renormalized; anything larger is surfaced as a positivity finding.
    pub fn transition_row(&self, t: f64, x_index: usize) -> Result<DiscreteMeasure> {
        if t == 0.0 {
            return Ok(DiscreteMeasure::dirac(self.grid.clone(), x_index));
        }
        let x = self.grid.point(x_index);
        let density = tensor_heat_row(&self.betas, &self.caps, t, &x, &self.grid)?;
        let weights: Vec<f64> = density
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.grid.weight(i))
            .collect();
        let raw = DiscreteMeasure::new(self.grid.clone(), weights);
        let neg = -raw.negative_mass();
        if neg > CLIP_BUDGET {
            return Err(Error::NonProbabilityRow {
                context: "RectangleSemigroup::transition_row",
                mass: raw.mass(),
                min_weight: raw.min_weight(),
            });
        }
        let (clipped, _) = raw.clipped_nonnegative();
        Ok(clipped)
    }

    /// `γ_t = p_{t,a}` with `a` the grid origin (the rectangle corner).
    pub fn gamma(&self, t: f64) -> Result<DiscreteMeasure> {
        self.transition_row(t, self.grid.origin_index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_is_probability_and_semigroup_holds() {
        let betas = [1.0, 2.0];
        let grid = Grid::rectangle(&betas, 21).unwrap();
        let sg = RectangleSemigroup::new(&betas, grid).unwrap();
        let g1 = sg.gamma(0.1).unwrap();
        assert!(g1.is_probability());
        let g2 = sg.gamma(0.2).unwrap();
        let g3 = sg.gamma(0.3).unwrap();
        let table = crate::measure::rectangle_table(&betas, 21).unwrap();
        let conv = table.convolve(&g1, &g2).unwrap();
        let dev = conv.tv_distance(&g3).unwrap();
        assert!(dev < 1e-10, "semigroup deviation {dev}");
        assert!(sg.tail_bound(0.1) < 1e-9);
    }

    #[test]
    fn gamma_at_time_zero_is_the_identity() {
        let betas = [1.0];
        let grid = Grid::rectangle(&betas, 21).unwrap();
        let sg = RectangleSemigroup::new(&betas, grid.clone()).unwrap();
        let g0 = sg.gamma(0.0).unwrap();
        let dirac = DiscreteMeasure::dirac(grid, 0);
        assert_eq!(g0.tv_distance(&dirac).unwrap(), 0.0);
    }

    #[test]
    fn transition_row_matches_convolution_with_dirac() {
        let betas = [1.0];
        let grid = Grid::rectangle(&betas, 21).unwrap();
        let sg = RectangleSemigroup::new(&betas, grid.clone()).unwrap();
        let table = crate::measure::rectangle_table(&betas, 21).unwrap();
        let t = 0.07;
        let gamma = sg.gamma(t).unwrap();
        for x in [0usize, 4, 13, 20] {
            let dx = DiscreteMeasure::dirac(grid.clone(), x);
            let conv = table.convolve(&gamma, &dx).unwrap();
            let oracle = sg.transition_row(t, x).unwrap();
            let dev = conv.tv_distance(&oracle).unwrap();
            assert!(dev < 1e-11, "x = {x}: deviation {dev}");
        }
    }
}
