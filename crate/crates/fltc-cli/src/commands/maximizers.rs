//! `maximizers`: common-maximizer check with falsification witnesses.

use anyhow::Result;
use serde::Serialize;

use fltc_core::spectra::{common_maximizer_check, CommonMaximizerReport, Spectrum};
use fltc_core::EigenIndex;

use crate::args::MaximizersArgs;
use crate::report::{parse_domain, resolve_out_dir, write_manifest, write_report, Report};

#[derive(Serialize)]
struct MaximizerResults {
    exists: bool,
    /// Indices of a disjoint maximizer-set pair, when falsified.
    witness_pair: Option<(String, String)>,
    check: CommonMaximizerReport,
}

pub fn run(args: MaximizersArgs) -> Result<()> {
    let domain = parse_domain(&args.domain)?;
    let dir = resolve_out_dir(&args.out.out, "maximizers")?;
    let spectrum = Spectrum::build(domain, args.count)?;
    let check = common_maximizer_check(&spectrum, args.count, args.tol, args.grid)?;
    let witness_pair = check.disjoint_pair.map(|(a, b)| {
        let fmt = |j: usize| -> String {
            let p: &EigenIndex = &spectrum.pairs()[j].index;
            p.to_string()
        };
        (fmt(a), fmt(b))
    });
    let report = Report {
        command: "maximizers".into(),
        config: &args,
        results: MaximizerResults { exists: check.exists, witness_pair, check },
        diagnostics: serde_json::json!({ "pairs": spectrum.len() }),
    };
    write_report(&dir, &report)?;
    write_manifest(&dir, "maximizers", vec!["report.json".into()])?;
    Ok(())
}
