//! Contour-data emitters: one CSV per eigenfunction plus a JSON manifest.
//!
//! CSV files carry the header `x,y,value`, row-major over the natural-chart
//! sample grid, with 17-significant-digit floats, `.` decimal separator and
//! `\n` line endings, so the bytes are stable across platforms and runs.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::maximizers::radial_envelope_max;
use super::{EigenIndex, Spectrum};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};

/// 17-significant-digit scientific notation; bit-stable across runs.
pub fn format_float17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Where an eigenfunction attains its maximum modulus.
#[derive(Debug, Clone, Serialize)]
pub struct MaximizerAnnotation {
    /// `everywhere` (constant), `outer`, `inner`, `interior` (circular
    /// domains, 2-grid-cell tolerance), or `corner`/`interior` (rectangle).
    pub location: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourFileInfo {
    pub file: String,
    pub index: EigenIndex,
    pub lambda: f64,
    pub maximizer: MaximizerAnnotation,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourManifest {
    pub domain: DomainSpec,
    pub normalization: String,
    pub grid_n: usize,
    pub files: Vec<ContourFileInfo>,
}

fn annotate(spec: &Spectrum, j: usize, grid_n: usize) -> Result<MaximizerAnnotation> {
    let pair = &spec.pairs()[j];
    if pair.is_constant() {
        return Ok(MaximizerAnnotation { location: "everywhere".into(), radius: None });
    }
    match spec.domain() {
        DomainSpec::Rectangle { .. } => {
            let d = spec.domain().dim();
            let v0 = spec.eval(j, &vec![0.0; d])?.abs();
            let loc = if (v0 - 1.0).abs() < 1e-12 { "corner" } else { "interior" };
            Ok(MaximizerAnnotation { location: loc.into(), radius: None })
        }
        DomainSpec::Disk { radius } | DomainSpec::Sector { radius, .. } => {
            let (_, r) = radial_envelope_max(spec, j)?;
            let h = radius / (grid_n - 1) as f64;
            let loc = if r >= radius - 2.0 * h {
                "outer"
            } else if r <= 2.0 * h {
                "center"
            } else {
                "interior"
            };
            Ok(MaximizerAnnotation { location: loc.into(), radius: Some(r) })
        }
        DomainSpec::Annulus { r0, radius } => {
            let (_, r) = radial_envelope_max(spec, j)?;
            let h = (radius - r0) / (grid_n - 1) as f64;
            let loc = if r >= radius - 2.0 * h {
                "outer"
            } else if r <= r0 + 2.0 * h {
                "inner"
            } else {
                "interior"
            };
            Ok(MaximizerAnnotation { location: loc.into(), radius: Some(r) })
        }
    }
}

/// Writes `eigen_XXX.csv` contour files for the first `count` eigenpairs
/// (orthonormal normalization) and returns the manifest describing them.
pub fn write_contours(
    spec: &Spectrum,
    count: usize,
    grid_n: usize,
    dir: &Path,
) -> Result<ContourManifest> {
    if spec.domain().dim() != 2 {
        return Err(Error::Parameter {
            context: "write_contours",
            message: "contour emission needs a two-dimensional domain".into(),
        });
    }
    let count = count.min(spec.len());
    let samples = spec.domain().sample_points(grid_n);
    let mut files = Vec::with_capacity(count);
    for j in 0..count {
        let name = format!("eigen_{j:03}.csv");
        let mut buf = String::with_capacity(samples.len() * 64);
        buf.push_str("x,y,value\n");
        for (xy, _) in &samples {
            let v = spec.pairs()[j].eval_orthonormal(spec.domain(), xy)?;
            buf.push_str(&format_float17(xy[0]));
            buf.push(',');
            buf.push_str(&format_float17(xy[1]));
            buf.push(',');
            buf.push_str(&format_float17(v));
            buf.push('\n');
        }
        let path = dir.join(&name);
        let mut f = std::fs::File::create(&path).map_err(|e| Error::Parameter {
            context: "write_contours",
            message: format!("cannot write {}: {e}", path.display()),
        })?;
        f.write_all(buf.as_bytes()).map_err(|e| Error::Parameter {
            context: "write_contours",
            message: format!("cannot write {}: {e}", path.display()),
        })?;
        files.push(ContourFileInfo {
            file: name,
            index: spec.pairs()[j].index.clone(),
            lambda: spec.pairs()[j].lambda,
            maximizer: annotate(spec, j, grid_n)?,
        });
    }
    Ok(ContourManifest {
        domain: spec.domain().clone(),
        normalization: "orthonormal".into(),
        grid_n,
        files,
    })
}
