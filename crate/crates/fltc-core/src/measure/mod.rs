//! Discrete signed-measure algebra on a finite grid.
//!
//! Measures are weight vectors over a shared [`Grid`]; the convolution is
//! given row-wise by a [`ConvolutionTable`] holding the product-formula
//! measures `ν_{x,y}`. Together they realize, at grid level, a commutative
//! probability-preserving measure algebra with identity `δ_a` and a
//! trivializing family of eigenfunctions.

mod axioms;
pub mod semigroup;
mod family;
mod ops;
mod table;

pub use axioms::{check_fltc_axioms, AxiomInputs, AxiomReport};
pub use family::TrivializingFamily;
pub use ops::{invariance_check, levy_khintchine_check};
pub use semigroup::RectangleSemigroup;
pub use table::{rectangle_table, ConvolutionTable, SparseRow};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Threshold below which a weight counts as nonnegative noise.
pub const NEG_TOL: f64 = 1e-12;
/// Mass budget for silent clipping of discretization negatives; anything
/// larger is a positivity finding and must not be hidden.
pub const CLIP_BUDGET: f64 = 1e-8;

/// A signed measure supported on a finite grid.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    grid: Arc<Grid>,
    weights: Vec<f64>,
    is_probability: bool,
}

impl DiscreteMeasure {
    pub fn new(grid: Arc<Grid>, weights: Vec<f64>) -> Self {
        assert_eq!(grid.len(), weights.len());
        let mass: f64 = weights.iter().sum();
        let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let is_probability = min >= -NEG_TOL && (mass - 1.0).abs() <= 1e-10;
        DiscreteMeasure { grid, weights, is_probability }
    }

    pub fn dirac(grid: Arc<Grid>, index: usize) -> Self {
        let mut w = vec![0.0; grid.len()];
        w[index] = 1.0;
        DiscreteMeasure::new(grid, w)
    }

    pub fn zero(grid: Arc<Grid>) -> Self {
        let w = vec![0.0; grid.len()];
        DiscreteMeasure::new(grid, w)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total variation norm `Σ|w_i|`.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Mass carried by strictly negative weights (a nonpositive number).
    pub fn negative_mass(&self) -> f64 {
        self.weights.iter().filter(|w| **w < 0.0).sum()
    }

    pub fn is_probability(&self) -> bool {
        self.is_probability
    }

    /// `μ(f) = Σ f_i w_i` for a grid function.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.weights.len());
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn same_grid(&self, other: &DiscreteMeasure) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid
    }

    pub fn tv_distance(&self, other: &DiscreteMeasure) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch { context: "tv_distance" });
        }
        Ok(self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    pub fn scaled(&self, c: f64) -> Self {
        DiscreteMeasure::new(self.grid.clone(), self.weights.iter().map(|w| c * w).collect())
    }

    pub fn add(&self, other: &DiscreteMeasure) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch { context: "DiscreteMeasure::add" });
        }
        Ok(DiscreteMeasure::new(
            self.grid.clone(),
            self.weights.iter().zip(&other.weights).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Clips negative weights to zero and renormalizes to the original
    /// mass. Returns the clipped measure and the (nonnegative) amount of
    /// mass that was clipped; callers must enforce the [`CLIP_BUDGET`]
    /// policy so genuine positivity failures are never masked.
    pub fn clipped_nonnegative(&self) -> (Self, f64) {
        let clipped: f64 = -self.negative_mass();
        if clipped == 0.0 {
            return (self.clone(), 0.0);
        }
        let mass = self.mass();
        let pos: f64 = self.weights.iter().filter(|w| **w > 0.0).sum();
        let scale = if pos > 0.0 { mass / pos } else { 0.0 };
        let w = self
            .weights
            .iter()
            .map(|&v| if v > 0.0 { v * scale } else { 0.0 })
            .collect();
        (DiscreteMeasure::new(self.grid.clone(), w), clipped)
    }

    /// Writes the measure as CSV `index,weight` lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,weight\n");
        for (i, w) in self.weights.iter().enumerate() {
            s.push_str(&format!("{i},{}\n", crate::spectra::contour::format_float17(*w)));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid21() -> Arc<Grid> {
        Grid::interval(0.0, 1.0, 21).unwrap()
    }

    #[test]
    fn probability_flag() {
        let g = grid21();
        let dirac = DiscreteMeasure::dirac(g.clone(), 3);
        assert!(dirac.is_probability());
        let mut w = vec![0.0; 21];
        w[0] = 0.6;
        w[5] = 0.5;
        assert!(!DiscreteMeasure::new(g.clone(), w).is_probability());
        let mut w2 = vec![0.0; 21];
        w2[0] = 1.1;
        w2[5] = -0.1;
        assert!(!DiscreteMeasure::new(g, w2).is_probability());
    }

    #[test]
    fn clip_preserves_mass_and_reports_amount() {
        let g = grid21();
        let mut w = vec![0.0; 21];
        w[1] = 1.000_000_01;
        w[2] = -1e-8;
        let m = DiscreteMeasure::new(g, w);
        let (c, clipped) = m.clipped_nonnegative();
        assert!((clipped - 1e-8).abs() < 1e-20);
        assert!((c.mass() - m.mass()).abs() < 1e-15);
        assert!(c.min_weight() >= 0.0);
    }

    #[test]
    fn csv_export_format() {
        let g = Grid::interval(0.0, 1.0, 3).unwrap();
        let m = DiscreteMeasure::dirac(g, 1);
        let csv = m.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("index,weight"));
        assert_eq!(lines.next(), Some("0,0.0000000000000000e0"));
        assert_eq!(lines.next(), Some("1,1.0000000000000000e0"));
    }

    #[test]
    fn tv_distance_requires_same_grid() {
        let a = DiscreteMeasure::dirac(grid21(), 0);
        let b = DiscreteMeasure::dirac(Grid::interval(0.0, 1.0, 11).unwrap(), 0);
        assert!(a.tv_distance(&b).is_err());
    }
}
