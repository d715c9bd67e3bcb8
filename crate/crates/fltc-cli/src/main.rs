//! Batch front end: every experiment as a reproducible run emitting
//! CSV/JSON. Scientific findings (positivity failures, missing common
//! maximizers) are data in the reports and exit 0; only operational and
//! validation errors exit nonzero.

mod args;
mod commands;
mod report;

use anyhow::{Context, Result};
use clap::Parser;

use args::Command;

#[derive(Parser)]
#[command(
    name = "fltc",
    about = "Constructs and falsifies convolution structures for diffusion semigroups on model domains.",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Eigen(a) => commands::eigen::run(a),
        Command::KernelScan(a) => commands::kernel_scan::run(a),
        Command::Maximizers(a) => commands::maximizers::run(a),
        Command::Convolve(a) => commands::convolve::run(a),
        Command::Axioms(a) => commands::axioms::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::ExpandGradient(a) => commands::expand::run(a),
        Command::Run(a) => {
            let text = std::fs::read_to_string(&a.config)
                .with_context(|| format!("cannot read {}", a.config.display()))?;
            let inner: Command =
                serde_json::from_str(&text).context("config does not match the command schema")?;
            anyhow::ensure!(
                !matches!(inner, Command::Run(_)),
                "run configs cannot nest another run"
            );
            dispatch(inner)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli.command) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
