//! `axioms`: the full FLTC axiom suite on the rectangle algebra.

use anyhow::Result;
use serde::Serialize;

use fltc_core::grid::Grid;
use fltc_core::measure::{
    check_fltc_axioms, rectangle_table, AxiomInputs, AxiomReport, RectangleSemigroup,
    TrivializingFamily,
};
use fltc_core::spectra::Spectrum;
use fltc_core::DomainSpec;

use crate::args::AxiomsArgs;
use crate::report::{resolve_out_dir, write_manifest, write_report, Report};

#[derive(Serialize)]
struct AxiomResults {
    report: AxiomReport,
    times_tested: Vec<f64>,
    tail_bounds: Vec<f64>,
}

pub fn run(args: AxiomsArgs) -> Result<()> {
    let dir = resolve_out_dir(&args.out.out, "axioms")?;
    let domain = DomainSpec::Rectangle { betas: args.beta.clone() };
    domain.validate()?;
    let table = rectangle_table(&args.beta, args.grid)?;
    let grid = Grid::rectangle(&args.beta, args.grid)?;
    let spectrum = Spectrum::build(domain, args.modes)?;
    let family = TrivializingFamily::rectangle(&spectrum, grid.clone(), args.modes)?;
    let sg = RectangleSemigroup::new(&args.beta, grid)?;

    // γ rows at the given times plus all pairwise sums
    let mut times = args.times.clone();
    for i in 0..args.times.len() {
        for j in i..args.times.len() {
            let s = args.times[i] + args.times[j];
            if !times.iter().any(|t| (t - s).abs() < 1e-12) {
                times.push(s);
            }
        }
    }
    times.sort_by(f64::total_cmp);
    let mut semigroup = Vec::with_capacity(times.len());
    let mut tail_bounds = Vec::with_capacity(times.len());
    for &t in &times {
        semigroup.push((t, sg.gamma(t)?));
        tail_bounds.push(sg.tail_bound(t));
    }

    let report = check_fltc_axioms(AxiomInputs {
        table: &table,
        family: &family,
        semigroup: &semigroup,
        transition_oracle: |t, x| sg.transition_row(t, x),
        random_trials: args.trials,
        seed: args.seed,
    })?;

    let out = Report {
        command: "axioms".into(),
        config: &args,
        results: AxiomResults { report, times_tested: times, tail_bounds },
        diagnostics: serde_json::json!({
            "grid_points": table.grid().len(),
            "family_size": family.len(),
        }),
    };
    write_report(&dir, &out)?;
    write_manifest(&dir, "axioms", vec!["report.json".into()])?;
    Ok(())
}
