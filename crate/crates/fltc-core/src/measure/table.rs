//! Convolution tables: the product-formula measures `ν_{x_i, x_j}`.
//!
//! Rows are stored sparsely for the unordered pair `(i, j)`, which makes
//! the commutativity `ν_{x,y} = ν_{y,x}` exact by construction. Every row
//! must be a probability vector and the identity row `ν_{x,a} = δ_x` is
//! validated at build time.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{DiscreteMeasure, NEG_TOL};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Sparse probability vector: `(flat grid index, weight)` atoms.
pub type SparseRow = Vec<(u32, f64)>;

/// The kernel of the convolution: for every grid pair, the measure
/// `ν_{x_i,x_j}`, plus the identity index `a`.
#[derive(Debug, Clone)]
pub struct ConvolutionTable {
    grid: Arc<Grid>,
    identity: usize,
    /// Upper-triangular storage: row for `(i, j)` with `i ≤ j` lives at
    /// `i·n − i(i−1)/2 + (j − i)`.
    rows: Vec<SparseRow>,
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

impl ConvolutionTable {
    /// Builds a table from a row constructor over unordered pairs,
    /// validating the probability and identity invariants.
    pub fn from_rows<F>(grid: Arc<Grid>, identity: usize, mut row_fn: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<SparseRow>,
    {
        let n = grid.len();
        let mut rows = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let row = row_fn(i, j)?;
                validate_row(&row, n, i, j)?;
                rows.push(row);
            }
        }
        let table = ConvolutionTable { grid, identity, rows };
        table.validate_identity()?;
        Ok(table)
    }

    fn validate_identity(&self) -> Result<()> {
        let n = self.grid.len();
        for x in 0..n {
            let row = self.row(x, self.identity);
            let ok = row.len() == 1 && row[0].0 as usize == x && (row[0].1 - 1.0).abs() < 1e-12;
            if !ok {
                return Err(Error::NonProbabilityRow {
                    context: "ConvolutionTable identity row",
                    mass: row.iter().map(|(_, w)| w).sum(),
                    min_weight: row.iter().map(|(_, w)| *w).fold(f64::INFINITY, f64::min),
                });
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn identity_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::dirac(self.grid.clone(), self.identity)
    }

    /// The product-formula row `ν_{x_i, x_j}` (order of `i`, `j` is
    /// irrelevant by storage).
    pub fn row(&self, i: usize, j: usize) -> &SparseRow {
        let n = self.grid.len();
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.rows[tri_index(n, i, j)]
    }

    /// `(μ ⋄ ν)[ξ] = Σ_{i,j} μ_i ν_j ν_{x_i,x_j}[ξ]` — bilinear, grid
    /// checked.
    pub fn convolve(
        &self,
        mu: &DiscreteMeasure,
        nu: &DiscreteMeasure,
    ) -> Result<DiscreteMeasure> {
        if !mu.same_grid(nu)
            || !(Arc::ptr_eq(mu.grid(), &self.grid) || *mu.grid() == self.grid)
        {
            return Err(Error::GridMismatch { context: "convolve" });
        }
        let n = self.grid.len();
        let mut out = vec![0.0; n];
        let mu_nz: Vec<(usize, f64)> = mu
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, w)| (i, *w))
            .collect();
        let nu_nz: Vec<(usize, f64)> = nu
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, w)| (i, *w))
            .collect();
        for &(i, wi) in &mu_nz {
            for &(j, wj) in &nu_nz {
                let c = wi * wj;
                for &(k, w) in self.row(i, j) {
                    out[k as usize] += c * w;
                }
            }
        }
        Ok(DiscreteMeasure::new(self.grid.clone(), out))
    }

    /// n-fold ⋄-power by binary exponentiation (associativity); `n = 0`
    /// gives the identity `δ_a`.
    pub fn nfold(&self, nu: &DiscreteMeasure, n: u32) -> Result<DiscreteMeasure> {
        let mut result = self.identity_measure();
        let mut base = nu.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = self.convolve(&result, &base)?;
            }
            k >>= 1;
            if k == 0 {
                return Ok(result);
            }
            base = self.convolve(&base, &base)?;
        }
    }

    /// ⋄-Poisson measure `e(ν) = e^{−‖ν‖} Σ_n ν^{⋄n}/n!` for a positive
    /// measure, truncated once the total-variation tail bound drops below
    /// 1e-12.
    pub fn poisson(&self, nu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
        if let Some((i, w)) = nu
            .weights()
            .iter()
            .enumerate()
            .find(|(_, w)| **w < -NEG_TOL)
        {
            return Err(Error::SignedInput { context: "poisson", weight: *w, index: i });
        }
        let mass = nu.mass();
        let scale = (-mass).exp();
        let mut acc = self.identity_measure().scaled(scale);
        let mut power = self.identity_measure(); // ν^{⋄n}/n!
        let mut coeff = scale; // e^{−‖ν‖} ‖ν‖ⁿ/n! tracker for the tail bound
        let mut tail = 1.0 - scale; // e^{−m} Σ_{k>n} m^k/k!
        for n in 1..=400u32 {
            power = self.convolve(&power, nu)?.scaled(1.0 / n as f64);
            acc = acc.add(&power.scaled(scale))?;
            coeff *= mass / n as f64;
            tail -= coeff;
            if tail.max(0.0) < 1e-12 {
                break;
            }
        }
        Ok(acc)
    }

    /// Portable JSON serialization (sparse rows per unordered pair).
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.grid.len();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i..n {
                rows.push(TableRowJson {
                    i,
                    j,
                    atoms: self.row(i, j).clone(),
                });
            }
        }
        serde_json::json!({
            "grid": self.grid.as_ref(),
            "identity_index": self.identity,
            "rows": rows,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parse = |m: &'static str| Error::Parameter { context: "ConvolutionTable::from_json", message: m.into() };
        let grid: Grid =
            serde_json::from_value(v["grid"].clone()).map_err(|_| parse("bad grid"))?;
        let identity = v["identity_index"].as_u64().ok_or_else(|| parse("bad identity"))? as usize;
        let rows_json: Vec<TableRowJson> =
            serde_json::from_value(v["rows"].clone()).map_err(|_| parse("bad rows"))?;
        let n = grid.len();
        let mut rows: Vec<Option<SparseRow>> = vec![None; n * (n + 1) / 2];
        for r in rows_json {
            let (i, j) = if r.i <= r.j { (r.i, r.j) } else { (r.j, r.i) };
            if j >= n {
                return Err(parse("row index out of range"));
            }
            rows[tri_index(n, i, j)] = Some(r.atoms);
        }
        let rows: Option<Vec<SparseRow>> = rows.into_iter().collect();
        let rows = rows.ok_or_else(|| parse("missing rows"))?;
        let table = ConvolutionTable { grid: Arc::new(grid), identity, rows };
        table.validate_identity()?;
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct TableRowJson {
    i: usize,
    j: usize,
    atoms: SparseRow,
}

fn validate_row(row: &SparseRow, n: usize, i: usize, j: usize) -> Result<()> {
    let mass: f64 = row.iter().map(|(_, w)| w).sum();
    let min = row.iter().map(|(_, w)| *w).fold(f64::INFINITY, f64::min);
    let in_range = row.iter().all(|(k, _)| (*k as usize) < n);
    if !in_range || (mass - 1.0).abs() > 1e-10 || min < -1e-10 {
        return Err(Error::NonProbabilityRow {
            context: if i == j { "ConvolutionTable diagonal row" } else { "ConvolutionTable row" },
            mass,
            min_weight: min,
        });
    }
    Ok(())
}

/// The exact tensor two-point reflection table of the rectangle: per axis
/// `δ_x ⋄ δ_y = ½(δ_{|x−y|} + δ_{β−|β−x−y|})`, tensorized over axes. Atom
/// positions are computed in integer index arithmetic, so rows carry no
/// discretization error.
pub fn rectangle_table(betas: &[f64], n_points: usize) -> Result<ConvolutionTable> {
    let grid = Grid::rectangle(betas, n_points)?;
    for k in 0..betas.len() {
        grid.check_reflection_closed(k)?;
    }
    let nk = n_points;
    let d = betas.len();
    let grid2 = grid.clone();
    ConvolutionTable::from_rows(grid, 0, move |i, j| {
        let mi = grid2.multi(i);
        let mj = grid2.multi(j);
        // per-axis atom index pairs (difference, reflected sum)
        let mut axis_atoms: Vec<[usize; 2]> = Vec::with_capacity(d);
        for k in 0..d {
            let (a, b) = (mi[k], mj[k]);
            let diff = a.abs_diff(b);
            let sum = (nk - 1) - (nk - 1).abs_diff(a + b);
            axis_atoms.push([diff, sum]);
        }
        let mut row: SparseRow = Vec::with_capacity(1 << d);
        let weight = 1.0 / (1u64 << d) as f64;
        for mask in 0..(1u32 << d) {
            let multi: Vec<usize> = (0..d)
                .map(|k| axis_atoms[k][((mask >> k) & 1) as usize])
                .collect();
            let flat = grid2.flat(&multi) as u32;
            match row.iter_mut().find(|(k, _)| *k == flat) {
                Some((_, w)) => *w += weight,
                None => row.push((flat, weight)),
            }
        }
        row.sort_by_key(|(k, _)| *k);
        Ok(row)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_table_reflection_example() {
        // δ_{0.5} ⋄ δ_{0.5} = ½δ_0 + ½δ_1 on [0,1]
        let t = rectangle_table(&[1.0], 21).unwrap();
        let g = t.grid().clone();
        let x = DiscreteMeasure::dirac(g.clone(), 10);
        let out = t.convolve(&x, &x).unwrap();
        assert!((out.weights()[0] - 0.5).abs() < 1e-15);
        assert!((out.weights()[20] - 0.5).abs() < 1e-15);
        assert!((out.total_variation() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interval_table_paper_two_point_law() {
        // δ_{0.3} ⋄ δ_{0.4} = ½δ_{0.1} + ½δ_{0.7}
        let t = rectangle_table(&[1.0], 21).unwrap();
        let g = t.grid().clone();
        let a = DiscreteMeasure::dirac(g.clone(), 6); // x = 0.3
        let b = DiscreteMeasure::dirac(g.clone(), 8); // y = 0.4
        let out = t.convolve(&a, &b).unwrap();
        assert!((out.weights()[2] - 0.5).abs() < 1e-15); // ξ = 0.1
        assert!((out.weights()[14] - 0.5).abs() < 1e-15); // ξ = 0.7
    }

    #[test]
    fn two_dimensional_atoms() {
        // δ_{(0.3,0.5)} ⋄ δ_{(0.4,0.5)}: 4 atoms of weight ¼ at {0.1,0.7}×{0,1}
        let t = rectangle_table(&[1.0, 1.0], 11).unwrap();
        let g = t.grid().clone();
        let a = DiscreteMeasure::dirac(g.clone(), g.index_of(&[0.3, 0.5]).unwrap());
        let b = DiscreteMeasure::dirac(g.clone(), g.index_of(&[0.4, 0.5]).unwrap());
        let out = t.convolve(&a, &b).unwrap();
        for target in [[0.1, 0.0], [0.1, 1.0], [0.7, 0.0], [0.7, 1.0]] {
            let k = g.index_of(&target).unwrap();
            assert!((out.weights()[k] - 0.25).abs() < 1e-15, "atom at {target:?}");
        }
    }

    #[test]
    fn identity_row_is_dirac() {
        let t = rectangle_table(&[1.0, 2.0], 5).unwrap();
        let g = t.grid().clone();
        for x in 0..g.len() {
            let out = t
                .convolve(
                    &DiscreteMeasure::dirac(g.clone(), x),
                    &t.identity_measure(),
                )
                .unwrap();
            let d = DiscreteMeasure::dirac(g.clone(), x);
            assert_eq!(out.tv_distance(&d).unwrap(), 0.0);
        }
    }

    #[test]
    fn nfold_base_cases() {
        let t = rectangle_table(&[1.0], 11).unwrap();
        let g = t.grid().clone();
        let nu = DiscreteMeasure::dirac(g.clone(), 3);
        let zero = t.nfold(&nu, 0).unwrap();
        assert_eq!(zero.tv_distance(&t.identity_measure()).unwrap(), 0.0);
        let one = t.nfold(&nu, 1).unwrap();
        assert!(one.tv_distance(&nu).unwrap() < 1e-15);
    }

    #[test]
    fn nfold_matches_left_fold() {
        let t = rectangle_table(&[1.0], 11).unwrap();
        let g = t.grid().clone();
        let mut w = vec![0.0; 11];
        w[2] = 0.4;
        w[7] = 0.6;
        let nu = DiscreteMeasure::new(g.clone(), w);
        let fast = t.nfold(&nu, 7).unwrap();
        let mut slow = t.identity_measure();
        for _ in 0..7 {
            slow = t.convolve(&slow, &nu).unwrap();
        }
        assert!(fast.tv_distance(&slow).unwrap() < 1e-10);
    }

    #[test]
    fn poisson_zero_measure_is_identity() {
        let t = rectangle_table(&[1.0], 11).unwrap();
        let nu = DiscreteMeasure::zero(t.grid().clone());
        let e = t.poisson(&nu).unwrap();
        assert!(e.tv_distance(&t.identity_measure()).unwrap() < 1e-15);
    }

    #[test]
    fn poisson_rejects_signed_input() {
        let t = rectangle_table(&[1.0], 11).unwrap();
        let mut w = vec![0.0; 11];
        w[1] = 1.0;
        w[2] = -0.2;
        let nu = DiscreteMeasure::new(t.grid().clone(), w);
        assert!(t.poisson(&nu).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = rectangle_table(&[1.0], 7).unwrap();
        let v = t.to_json();
        let back = ConvolutionTable::from_json(&v).unwrap();
        let g = t.grid().clone();
        for i in 0..g.len() {
            for j in i..g.len() {
                assert_eq!(t.row(i, j), back.row(i, j));
            }
        }
        assert_eq!(t.identity_index(), back.identity_index());
    }

    #[test]
    fn non_reflection_closed_grid_is_rejected() {
        // an interval grid not starting at 0 cannot host the reflection law
        let grid = Grid::interval(0.1, 1.0, 10).unwrap();
        grid.check_reflection_closed(0).unwrap_err();
    }
}
