//! `simulate`: ⋄-Lévy paths with marginal goodness-of-fit and martingale
//! reports.

use anyhow::{Context, Result};
use serde::Serialize;

use fltc_core::grid::Grid;
use fltc_core::levy::{
    chi_square_gof, martingale_check, simulate_path, simulate_terminal_ensemble, GofReport,
    MartingaleReport, SemigroupSpec, TransitionKernel,
};
use fltc_core::measure::{
    rectangle_table, DiscreteMeasure, RectangleSemigroup, TrivializingFamily,
};
use fltc_core::spectra::contour::format_float17;
use fltc_core::spectra::Spectrum;
use fltc_core::DomainSpec;

use crate::args::SimulateArgs;
use crate::report::{parse_atoms, resolve_out_dir, write_manifest, write_report, write_text, Report};

#[derive(Serialize)]
struct SimulateResults {
    paths_file: String,
    paths_written: usize,
    gof: Option<GofReport>,
    martingales: Vec<MartingaleReport>,
    all_martingales_pass: bool,
}

pub fn run(args: SimulateArgs) -> Result<()> {
    let dir = resolve_out_dir(&args.out.out, "simulate")?;
    let domain = DomainSpec::Rectangle { betas: args.beta.clone() };
    domain.validate()?;
    let grid = Grid::rectangle(&args.beta, args.grid)?;
    let table = rectangle_table(&args.beta, args.grid)?;

    let spec = match &args.jump {
        None => SemigroupSpec::Heat(RectangleSemigroup::new(&args.beta, grid.clone())?),
        Some(entries) => {
            let mut w = vec![0.0; grid.len()];
            for (i, v) in parse_atoms(entries)? {
                anyhow::ensure!(i < grid.len(), "jump atom index {i} out of range");
                w[i] = v;
            }
            SemigroupSpec::Poisson { jump: DiscreteMeasure::new(grid.clone(), w) }
        }
    };

    let x0 = match &args.x0 {
        Some(coords) => grid.index_of(coords).context("--x0 must be a grid point")?,
        None => grid.len() / 2,
    };
    let kernel = TransitionKernel::build(&table, &spec, args.t / args.steps as f64)?;

    // path CSV: path,t,index,coordinates…
    let mut csv = String::from("path,t,index");
    for k in 0..grid.dim() {
        csv.push_str(&format!(",x{k}"));
    }
    csv.push('\n');
    for p in 0..args.paths {
        let path = simulate_path(&kernel, args.t, args.steps, x0, args.seed, p as u64);
        for (i, &state) in path.states.iter().enumerate() {
            csv.push_str(&format!("{p},{},{state}", format_float17(path.times[i])));
            for c in grid.point(state) {
                csv.push(',');
                csv.push_str(&format_float17(c));
            }
            csv.push('\n');
        }
    }
    write_text(&dir, "paths.csv", &csv)?;

    // marginal GOF against the exact heat-kernel row (diffusion spec only)
    let gof = if args.gof_paths >= 10_000 {
        match &spec {
            SemigroupSpec::Heat(sg) => {
                let finals =
                    simulate_terminal_ensemble(&kernel, args.steps, x0, args.seed, args.gof_paths);
                let mut counts = vec![0u64; grid.len()];
                for s in finals {
                    counts[s] += 1;
                }
                let oracle = sg.transition_row(args.t, x0)?;
                Some(chi_square_gof(&counts, oracle.weights(), args.gof_paths as u64)?)
            }
            SemigroupSpec::Poisson { .. } => None,
        }
    } else {
        None
    };

    let modes = (args.martingale_modes + 1).max(6);
    let spectrum = Spectrum::build(domain, modes)?;
    let family = TrivializingFamily::rectangle(&spectrum, grid.clone(), modes)?;
    let mut martingales = Vec::new();
    for j in 0..args.martingale_modes.min(family.len()) {
        martingales.push(martingale_check(
            &table,
            &spec,
            &family,
            j,
            x0,
            args.t,
            args.steps.max(10),
            100_000,
            args.seed,
        )?);
    }
    let all_pass = martingales.iter().all(|m| m.pass);

    let report = Report {
        command: "simulate".into(),
        config: &args,
        results: SimulateResults {
            paths_file: "paths.csv".into(),
            paths_written: args.paths,
            gof,
            martingales,
            all_martingales_pass: all_pass,
        },
        diagnostics: serde_json::json!({
            "x0_index": x0,
            "t_step": args.t / args.steps as f64,
            "grid_points": grid.len(),
        }),
    };
    write_report(&dir, &report)?;
    write_manifest(&dir, "simulate", vec!["report.json".into(), "paths.csv".into()])?;
    Ok(())
}
