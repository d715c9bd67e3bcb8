//! Trivializing families: tabulated eigenfunctions that turn convolution
//! into pointwise multiplication of integrals.

use std::sync::Arc;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectra::Spectrum;

use super::DiscreteMeasure;

/// Matrix `Φ[j][i] = φ_j(x_i)` of the first `J` eigenfunctions on a grid,
/// with their eigenvalues and the identity index `a`. The stored functions
/// are max-normalized: `Φ[0] ≡ 1` and `|Φ[j][i]| ≤ 1` with `Φ[j][a] = 1`.
#[derive(Debug, Clone)]
pub struct TrivializingFamily {
    grid: Arc<Grid>,
    values: Vec<Vec<f64>>,
    lambdas: Vec<f64>,
    identity: usize,
}

impl TrivializingFamily {
    pub fn new(
        grid: Arc<Grid>,
        values: Vec<Vec<f64>>,
        lambdas: Vec<f64>,
        identity: usize,
    ) -> Result<Self> {
        if values.len() != lambdas.len() || values.iter().any(|v| v.len() != grid.len()) {
            return Err(Error::Parameter {
                context: "TrivializingFamily::new",
                message: "shape mismatch between values, lambdas, grid".into(),
            });
        }
        let fam = TrivializingFamily { grid, values, lambdas, identity };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<()> {
        let bad = |message: String| Error::Parameter { context: "TrivializingFamily", message };
        if self.values.is_empty() {
            return Err(bad("family is empty".into()));
        }
        for (i, v) in self.values[0].iter().enumerate() {
            if (v - 1.0).abs() > 1e-12 {
                return Err(bad(format!("φ_1 is not the constant 1 at grid index {i}")));
            }
        }
        for (j, row) in self.values.iter().enumerate() {
            if (row[self.identity] - 1.0).abs() > 1e-10 {
                return Err(bad(format!("φ_{j} is not 1 at the identity point")));
            }
            for (i, v) in row.iter().enumerate() {
                if v.abs() > 1.0 + 1e-10 {
                    return Err(bad(format!("|φ_{j}(x_{i})| = {} exceeds 1", v.abs())));
                }
            }
        }
        Ok(())
    }

    /// Builds the rectangle family from the spectrum's leading `count`
    /// eigenpairs (raw cosine products are max-normalized with value 1 at
    /// the corner, which is grid index 0).
    pub fn rectangle(spectrum: &Spectrum, grid: Arc<Grid>, count: usize) -> Result<Self> {
        let betas = match spectrum.domain() {
            DomainSpec::Rectangle { betas } => betas.clone(),
            _ => {
                return Err(Error::Parameter {
                    context: "TrivializingFamily::rectangle",
                    message: "spectrum is not a rectangle spectrum".into(),
                })
            }
        };
        if grid.dim() != betas.len() {
            return Err(Error::GridMismatch { context: "TrivializingFamily::rectangle" });
        }
        let count = count.min(spectrum.len());
        let mut values = Vec::with_capacity(count);
        let mut lambdas = Vec::with_capacity(count);
        for j in 0..count {
            let mut row = Vec::with_capacity(grid.len());
            for i in 0..grid.len() {
                row.push(spectrum.eval(j, &grid.point(i))?);
            }
            values.push(row);
            lambdas.push(spectrum.pairs()[j].lambda);
        }
        TrivializingFamily::new(grid, values, lambdas, 0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.lambdas[j]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn values(&self, j: usize) -> &[f64] {
        &self.values[j]
    }

    /// `[μ(φ_j)]_{j < J}` — the trivializing transform of a measure.
    pub fn trivialize(&self, mu: &DiscreteMeasure) -> Vec<f64> {
        self.values.iter().map(|row| mu.integrate(row)).collect()
    }
}
