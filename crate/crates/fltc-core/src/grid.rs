//! Tensor-product sample grids.
//!
//! A [`Grid`] is a tensor product of uniform axes. It carries the trapezoid
//! quadrature weights, which are positive, so that discretizing a density
//! against them preserves measure positivity. Boundary points are always
//! included.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A uniform axis `[0, length]` (or `[a, b]` via `offset`) with `n ≥ 2` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    offset: f64,
    length: f64,
    n: usize,
}

impl Axis {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || n < 2 {
            return Err(Error::Parameter {
                context: "Axis::new",
                message: format!("need b > a and n ≥ 2, got [{a}, {b}] with n = {n}"),
            });
        }
        Ok(Axis { offset: a, length: b - a, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.n - 1) as f64
    }

    pub fn start(&self) -> f64 {
        self.offset
    }

    pub fn end(&self) -> f64 {
        self.offset + self.length
    }

    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.offset + self.length * i as f64 / (self.n - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Trapezoid weight of point `i`: `h/2` at the ends, `h` inside.
    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i == self.n - 1 {
            0.5 * h
        } else {
            h
        }
    }

    /// Index of the grid point equal to `x`, if `x` lies on the grid
    /// (within `1e-9` of the spacing).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let t = (x - self.offset) / self.spacing();
        let i = t.round();
        if (t - i).abs() < 1e-9 && i >= 0.0 && (i as usize) < self.n {
            Some(i as usize)
        } else {
            None
        }
    }
}

/// Tensor product of uniform axes with flat row-major indexing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Self {
        assert!(!axes.is_empty());
        Grid { axes }
    }

    /// Uniform grid on the rectangle `[0, β_1] × … × [0, β_d]` with
    /// `n` points per axis.
    pub fn rectangle(betas: &[f64], n: usize) -> Result<Arc<Self>> {
        let axes = betas
            .iter()
            .map(|&b| Axis::new(0.0, b, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Grid::new(axes)))
    }

    /// Uniform grid on the interval `[a, b]`.
    pub fn interval(a: f64, b: f64, n: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Grid::new(vec![Axis::new(a, b, n)?])))
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major flat index of a multi-index.
    pub fn flat(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dim());
        let mut idx = 0;
        for (k, &i) in multi.iter().enumerate() {
            idx = idx * self.axes[k].len() + i;
        }
        idx
    }

    /// Multi-index of a flat index.
    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            let n = self.axes[k].len();
            out[k] = flat % n;
            flat /= n;
        }
        out
    }

    /// Coordinates of the flat index `i`.
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.multi(i)
            .iter()
            .enumerate()
            .map(|(k, &j)| self.axes[k].point(j))
            .collect()
    }

    /// Tensor trapezoid weight of the flat index `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.multi(i)
            .iter()
            .enumerate()
            .map(|(k, &j)| self.axes[k].weight(j))
            .product()
    }

    /// All tensor trapezoid weights, indexed flat.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![1.0; self.len()];
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = self.weight(i);
        }
        w
    }

    /// Flat index of the point with all coordinates equal to the axis starts.
    pub fn origin_index(&self) -> usize {
        0
    }

    /// Flat index of a point given by coordinates, if all coordinates lie
    /// on the grid.
    pub fn index_of(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut multi = Vec::with_capacity(self.dim());
        for (k, &xi) in x.iter().enumerate() {
            multi.push(self.axes[k].index_of(xi)?);
        }
        Some(self.flat(&multi))
    }

    /// Checks that every pair of points on axis `k` has both reflection
    /// images `|x−y|` and `β−|β−x−y|` on the grid. Uniform grids starting
    /// at 0 satisfy this automatically; the check guards other setups.
    pub fn check_reflection_closed(&self, k: usize) -> Result<()> {
        let ax = &self.axes[k];
        if ax.start() != 0.0 {
            return Err(Error::GridNotReflectionClosed {
                x: ax.start(),
                y: ax.start(),
                image: 0.0,
            });
        }
        let beta = ax.end();
        for i in 0..ax.len() {
            for j in i..ax.len() {
                let (x, y) = (ax.point(i), ax.point(j));
                let d = (x - y).abs();
                let s = beta - (beta - x - y).abs();
                for image in [d, s] {
                    if ax.index_of(image).is_none() {
                        return Err(Error::GridNotReflectionClosed { x, y, image });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_multi_roundtrip() {
        let g = Grid::rectangle(&[1.0, 2.0], 5).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.flat(&g.multi(i)), i);
        }
    }

    #[test]
    fn trapezoid_weights_sum_to_volume() {
        let g = Grid::rectangle(&[1.0, 2.0], 21).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_grid_is_reflection_closed() {
        let g = Grid::rectangle(&[1.0], 21).unwrap();
        g.check_reflection_closed(0).unwrap();
    }

    #[test]
    fn index_of_recovers_points() {
        let g = Grid::rectangle(&[1.0, 1.0], 11).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.index_of(&g.point(i)), Some(i));
        }
        assert_eq!(g.index_of(&[0.05, 0.0]), None);
    }
}
