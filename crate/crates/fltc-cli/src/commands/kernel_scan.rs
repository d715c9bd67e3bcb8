//! `kernel-scan`: exhaustive grid minimization of q_t at several times.

use anyhow::Result;
use serde::Serialize;

use fltc_core::domains::DomainSpec;
use fltc_core::spectra::{PositivityScan, Spectrum};

use crate::args::KernelScanArgs;
use crate::report::{resolve_out_dir, write_manifest, write_report, Report};

#[derive(Serialize)]
struct ScanResults {
    scans: Vec<PositivityScan>,
    /// A minimum below −tail_bound would certify a positivity failure;
    /// this flag summarizes whether any scan shows one.
    positivity_failure: bool,
}

pub fn run(args: KernelScanArgs) -> Result<()> {
    let dir = resolve_out_dir(&args.out.out, "kernel-scan")?;
    let domain = DomainSpec::Rectangle { betas: args.beta.clone() };
    domain.validate()?;
    let spectrum = Spectrum::build(domain, args.count + 16)?;
    let mut scans = Vec::with_capacity(args.times.len());
    for &t in &args.times {
        scans.push(spectrum.positivity_scan(t, args.grid, args.count)?);
    }
    let positivity_failure = scans.iter().any(|s| s.min_value < -s.tail_bound);
    let report = Report {
        command: "kernel-scan".into(),
        config: &args,
        results: ScanResults { scans, positivity_failure },
        diagnostics: serde_json::json!({ "modes": args.count, "grid": args.grid }),
    };
    write_report(&dir, &report)?;
    write_manifest(&dir, "kernel-scan", vec!["report.json".into()])?;
    Ok(())
}
