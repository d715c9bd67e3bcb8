//! `expand-gradient`: uniform expansion convergence experiment.

use anyhow::Result;
use serde::Serialize;

use fltc_core::spectra::{gradient_expansion_check, ExpansionReport, Spectrum, TestFunction};
use fltc_core::DomainSpec;

use crate::args::ExpandGradientArgs;
use crate::report::{parse_atoms, resolve_out_dir, write_manifest, write_report, Report};

#[derive(Serialize)]
struct ExpandResults {
    report: ExpansionReport,
    errors_monotone: bool,
    final_gradient_norm_at_steepest: f64,
    oracle_gradient_norm_at_steepest: f64,
}

pub fn run(args: ExpandGradientArgs) -> Result<()> {
    let dir = resolve_out_dir(&args.out.out, "expand-gradient")?;
    let domain = DomainSpec::Rectangle { betas: args.beta.clone() };
    domain.validate()?;
    let max_count = *args.counts.last().unwrap_or(&0);
    let spectrum = Spectrum::build(domain, max_count + 16)?;

    let h = match &args.combo {
        Some(entries) => {
            let atoms = parse_atoms(entries)?;
            TestFunction::EigenCombo(atoms)
        }
        None => {
            let center = args.bump_center.clone().unwrap_or_else(|| {
                args.beta.iter().map(|b| 0.45 * b).collect()
            });
            TestFunction::Bump { center, radius: args.bump_radius, amplitude: 1.0 }
        }
    };
    let report = gradient_expansion_check(&spectrum, &h, &args.counts, args.quad, args.sample)?;
    let monotone = report.value_errors.windows(2).all(|w| w[1] <= w[0] + 1e-9)
        && report.gradient_errors.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let out = Report {
        command: "expand-gradient".into(),
        config: &args,
        results: ExpandResults {
            errors_monotone: monotone,
            final_gradient_norm_at_steepest: norm(&report.partial_gradient_at_steepest),
            oracle_gradient_norm_at_steepest: norm(&report.oracle_gradient_at_steepest),
            report,
        },
        diagnostics: serde_json::json!({ "modes_available": spectrum.len() }),
    };
    write_report(&dir, &out)?;
    write_manifest(&dir, "expand-gradient", vec!["report.json".into()])?;
    Ok(())
}
