//! `eigen`: eigenvalue table plus contour data files.

use anyhow::Result;
use serde::Serialize;

use fltc_core::spectra::contour::{format_float17, write_contours};
use fltc_core::spectra::Spectrum;

use crate::args::EigenArgs;
use crate::report::{parse_domain, resolve_out_dir, write_manifest, write_report, write_text, Report};

#[derive(Serialize)]
struct EigenResults {
    eigenvalues: Vec<EigenRow>,
    contour_files: Vec<String>,
}

#[derive(Serialize)]
struct EigenRow {
    index: String,
    lambda: f64,
    multiplicity: usize,
}

pub fn run(args: EigenArgs) -> Result<()> {
    let domain = parse_domain(&args.domain)?;
    let dir = resolve_out_dir(&args.out.out, "eigen")?;
    let spectrum = Spectrum::build(domain.clone(), args.count)?;

    let classes = spectrum.multiplicity_classes();
    let mut rows = Vec::with_capacity(spectrum.len());
    for class in &classes {
        for &j in class {
            rows.push(EigenRow {
                index: spectrum.pairs()[j].index.to_string(),
                lambda: spectrum.pairs()[j].lambda,
                multiplicity: class.len(),
            });
        }
    }
    let mut csv = String::from("index,lambda,multiplicity\n");
    for r in &rows {
        csv.push_str(&format!(
            "\"{}\",{},{}\n",
            r.index,
            format_float17(r.lambda),
            r.multiplicity
        ));
    }
    write_text(&dir, "eigenvalues.csv", &csv)?;
    let mut files = vec!["eigenvalues.csv".to_string(), "report.json".to_string()];

    let mut contour_files = Vec::new();
    let mut contour_manifest = None;
    if domain.dim() == 2 {
        let manifest = write_contours(&spectrum, spectrum.len(), args.grid, &dir)?;
        contour_files = manifest.files.iter().map(|f| f.file.clone()).collect();
        files.extend(contour_files.iter().cloned());
        contour_manifest = Some(manifest);
    }

    let report = Report {
        command: "eigen".into(),
        config: &args,
        results: EigenResults { eigenvalues: rows, contour_files },
        diagnostics: contour_manifest,
    };
    write_report(&dir, &report)?;
    write_manifest(&dir, "eigen", files)?;
    Ok(())
}
