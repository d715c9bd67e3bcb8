//! Report and manifest writers.
//!
//! Every command emits a deterministic `report.json` (pure in config and
//! seed) plus a `manifest.json` that lists the produced files and carries
//! the only timestamp of the run.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

use fltc_core::domains::DomainSpec;

use crate::args::DomainArgs;

/// Deterministic report envelope: the config echo, the results and the
/// numeric diagnostics of a run.
#[derive(Debug, Serialize)]
pub struct Report<C: Serialize, R: Serialize, D: Serialize> {
    pub command: String,
    pub config: C,
    pub results: R,
    pub diagnostics: D,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub timestamp_unix_seconds: u64,
    pub files: Vec<String>,
}

pub fn resolve_out_dir(explicit: &Option<PathBuf>, command: &str) -> Result<PathBuf> {
    let dir = match explicit {
        Some(d) => d.clone(),
        None => {
            let root = std::env::var("FLTC_OUTPUT_ROOT").unwrap_or_else(|_| "out".into());
            Path::new(&root).join(command)
        }
    };
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(dir)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_report<C: Serialize, R: Serialize, D: Serialize>(
    dir: &Path,
    report: &Report<C, R, D>,
) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    write_text(dir, "report.json", &text)
}

/// Writes the manifest last, listing everything the run produced.
pub fn write_manifest(dir: &Path, command: &str, mut files: Vec<String>) -> Result<()> {
    files.sort();
    files.push("manifest.json".into());
    let manifest = Manifest {
        command: command.into(),
        timestamp_unix_seconds: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_text(dir, "manifest.json", &text)
}

pub fn parse_domain(args: &DomainArgs) -> Result<DomainSpec> {
    let spec = match args.domain.as_str() {
        "rectangle" => DomainSpec::Rectangle {
            betas: args
                .beta
                .clone()
                .context("rectangle needs --beta")?,
        },
        "disk" => DomainSpec::Disk { radius: args.radius.context("disk needs --R")? },
        "sector" => DomainSpec::Sector {
            q: args.q.context("sector needs --q")?,
            radius: args.radius.context("sector needs --R")?,
        },
        "annulus" => DomainSpec::Annulus {
            r0: args.r0.context("annulus needs --r0")?,
            radius: args.radius.context("annulus needs --R")?,
        },
        other => anyhow::bail!("unknown domain {other:?}"),
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses `index:value` atom lists.
pub fn parse_atoms(entries: &[String]) -> Result<Vec<(usize, f64)>> {
    entries
        .iter()
        .map(|e| {
            let (i, v) = e
                .split_once(':')
                .with_context(|| format!("atom {e:?} is not index:value"))?;
            Ok((i.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}
