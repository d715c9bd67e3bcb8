//! `convolve`: one product-formula row, exact or from the t ↓ 0 limit.

use anyhow::{Context, Result};
use serde::Serialize;

use fltc_core::grid::Grid;
use fltc_core::measure::{rectangle_table, DiscreteMeasure, TrivializingFamily};
use fltc_core::spectra::contour::format_float17;
use fltc_core::spectra::Spectrum;
use fltc_core::sturm::{neumann_eigenvalues, product_measure, SLProblem};
use fltc_core::DomainSpec;

use crate::args::ConvolveArgs;
use crate::report::{resolve_out_dir, write_manifest, write_report, write_text, Report};

#[derive(Serialize)]
struct ConvolveResults {
    method: String,
    mass: f64,
    min_weight: f64,
    /// `max_j |ν(φ_j) − φ_j(x)φ_j(y)|` over the trivializing family.
    product_formula_residual: f64,
    atoms: Vec<(usize, f64)>,
    csv_file: String,
}

pub fn run(args: ConvolveArgs) -> Result<()> {
    let dir = resolve_out_dir(&args.out.out, "convolve")?;
    let d = args.beta.len();
    let grid = Grid::rectangle(&args.beta, args.grid)?;
    let xi = grid.index_of(&args.x).context("--x must be a grid point")?;
    let yi = grid.index_of(&args.y).context("--y must be a grid point")?;

    let measure: DiscreteMeasure = match args.method.as_str() {
        "table" => {
            let table = rectangle_table(&args.beta, args.grid)?;
            let dx = DiscreteMeasure::dirac(grid.clone(), xi);
            let dy = DiscreteMeasure::dirac(grid.clone(), yi);
            table.convolve(&dx, &dy)?
        }
        "limit" => {
            anyhow::ensure!(d == 1, "the t ↓ 0 limit method is one-dimensional");
            let problem = SLProblem::cosine(args.beta[0]);
            let spectrum = neumann_eigenvalues(&problem, args.grid.min(100))?;
            let schedule: Vec<f64> = (0..=40).map(|i| 0.1 * 0.5_f64.powi(i)).collect();
            let pm = product_measure(&problem, &spectrum, args.x[0], args.y[0], &grid, &schedule)?;
            pm.measure
        }
        other => anyhow::bail!("unknown method {other:?} (expected table|limit)"),
    };

    // independent trivialization check of the produced row
    let spectrum = Spectrum::build(DomainSpec::Rectangle { betas: args.beta.clone() }, 12)?;
    let family = TrivializingFamily::rectangle(&spectrum, grid.clone(), 12)?;
    let tv = family.trivialize(&measure);
    let mut residual = 0.0_f64;
    for (j, t) in tv.iter().enumerate() {
        residual = residual.max((t - family.values(j)[xi] * family.values(j)[yi]).abs());
    }

    // CSV: `xi,weight` in one dimension, `index,weight` otherwise
    let csv_file = if d == 1 { "nu_row.csv" } else { "nu_row_indexed.csv" };
    let mut csv = String::new();
    if d == 1 {
        csv.push_str("xi,weight\n");
        for (i, w) in measure.weights().iter().enumerate() {
            csv.push_str(&format!(
                "{},{}\n",
                format_float17(grid.point(i)[0]),
                format_float17(*w)
            ));
        }
    } else {
        csv = measure.to_csv();
    }
    write_text(&dir, csv_file, &csv)?;

    // essential support only; the CSV carries the full vector
    let atoms: Vec<(usize, f64)> = measure
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.abs() > 1e-6)
        .map(|(i, w)| (i, *w))
        .collect();
    let report = Report {
        command: "convolve".into(),
        config: &args,
        results: ConvolveResults {
            method: args.method.clone(),
            mass: measure.mass(),
            min_weight: measure.min_weight(),
            product_formula_residual: residual,
            atoms,
            csv_file: csv_file.into(),
        },
        diagnostics: serde_json::json!({ "grid_points": grid.len() }),
    };
    write_report(&dir, &report)?;
    write_manifest(&dir, "convolve", vec!["report.json".into(), csv_file.into()])?;
    Ok(())
}
