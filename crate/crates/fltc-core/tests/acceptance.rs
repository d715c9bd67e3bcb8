//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its measured quantities and asserting the stated tolerances
//! and runtime budgets.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fltc_core::bessel::{annulus_cross, annulus_cross_zeros, bessel_j_prime, jprime_zeros};
use fltc_core::domains::DomainSpec;
use fltc_core::grid::Grid;
use fltc_core::levy::{
    chi_square_gof, martingale_check, simulate_terminal_ensemble, SemigroupSpec, TransitionKernel,
};
use fltc_core::measure::{
    check_fltc_axioms, levy_khintchine_check, rectangle_table, AxiomInputs, DiscreteMeasure,
    RectangleSemigroup, TrivializingFamily,
};
use fltc_core::spectra::{
    common_maximizer_check, contour, gradient_expansion_check, Spectrum, TestFunction,
};
use fltc_core::sturm::{neumann_eigenvalues, product_measure, SLProblem};
use fltc_core::{EigenIndex, Parity};

struct Criterion {
    name: &'static str,
    budget_s: f64,
    start: Instant,
}

impl Criterion {
    fn begin(name: &'static str, budget_s: f64) -> Self {
        Criterion { name, budget_s, start: Instant::now() }
    }

    fn finish(self, pass: bool, detail: &str) {
        let elapsed = self.start.elapsed().as_secs_f64();
        let verdict = if pass && elapsed < self.budget_s { "PASS" } else { "FAIL" };
        println!(
            "ACCEPTANCE {}: {verdict} ({elapsed:.2}s of {:.0}s budget) — {detail}",
            self.name, self.budget_s
        );
        assert!(pass, "{} failed: {detail}", self.name);
        assert!(
            elapsed < self.budget_s,
            "{} exceeded its {}s runtime budget ({elapsed:.2}s)",
            self.name,
            self.budget_s
        );
    }
}

/// Criterion 1 — cosine-hypergroup oracle: `product_measure` on the
/// 21-point grid recovers the two-point reflection law at 25 random grid
/// pairs with TV < 1e-3 and product-formula residual < 1e-6 for the first
/// 10 eigenvalues.
#[test]
fn criterion_1_cosine_hypergroup_oracle() {
    let c = Criterion::begin("1 (cosine hypergroup oracle)", 10.0);
    let beta = 1.0;
    let problem = SLProblem::cosine(beta);
    let spectrum = neumann_eigenvalues(&problem, 25).unwrap();
    let grid = Grid::interval(0.0, beta, 21).unwrap();
    let schedule: Vec<f64> = (0..=40).map(|i| 0.1 * 0.5_f64.powi(i)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_tv = 0.0_f64;
    let mut worst_residual = 0.0_f64;
    for _ in 0..25 {
        let i = rng.gen_range(0..21usize);
        let k = rng.gen_range(0..21usize);
        let (x, y) = (i as f64 / 20.0, k as f64 / 20.0);
        let pm = product_measure(&problem, &spectrum, x, y, &grid, &schedule).unwrap();
        worst_residual = worst_residual.max(pm.residual);

        // exact two-point law by index arithmetic
        let mut target = vec![0.0; 21];
        let diff = i.abs_diff(k);
        let sum = 20 - 20usize.abs_diff(i + k);
        target[diff] += 0.5;
        target[sum] += 0.5;
        let target = DiscreteMeasure::new(grid.clone(), target);
        worst_tv = worst_tv.max(pm.measure.tv_distance(&target).unwrap());
    }
    let pass = worst_tv < 1e-3 && worst_residual < 1e-6;
    c.finish(pass, &format!("max TV {worst_tv:.3e} (< 1e-3), max residual {worst_residual:.3e} (< 1e-6)"));
}

/// Criterion 2 — FLTC axiom suite on the (1,2) rectangle, 21×21 grid,
/// J = 25: every deviation below 1e-6.
#[test]
fn criterion_2_fltc_axiom_suite() {
    let c = Criterion::begin("2 (FLTC axiom suite)", 60.0);
    let betas = [1.0, 2.0];
    let table = rectangle_table(&betas, 21).unwrap();
    let grid = Grid::rectangle(&betas, 21).unwrap();
    let spectrum = Spectrum::build(DomainSpec::rectangle(&betas), 25).unwrap();
    let family = TrivializingFamily::rectangle(&spectrum, grid.clone(), 25).unwrap();
    let sg = RectangleSemigroup::new(&betas, grid).unwrap();

    let times = [0.1, 0.2, 0.3, 0.4];
    let semigroup: Vec<(f64, DiscreteMeasure)> =
        times.iter().map(|&t| (t, sg.gamma(t).unwrap())).collect();
    let report = check_fltc_axioms(AxiomInputs {
        table: &table,
        family: &family,
        semigroup: &semigroup,
        transition_oracle: |t, x| sg.transition_row(t, x),
        random_trials: 50,
        seed: 7,
    })
    .unwrap();

    let pass = report.max_deviation < 1e-6 && report.injectivity_slack == 0;
    c.finish(
        pass,
        &format!(
            "max deviation {:.3e} (< 1e-6): commutativity {:.1e}, associativity {:.1e}, \
             identity {:.1e}, probability {:.1e}, trivialization {:.1e}, semigroup {:.1e}, \
             transition {:.1e}; rank {}/{}",
            report.max_deviation,
            report.commutativity,
            report.associativity,
            report.identity,
            report.probability_closure,
            report.trivialization,
            report.semigroup,
            report.transition,
            report.injectivity_rank,
            family.len(),
        ),
    );
}

/// Criterion 3 — kernel positivity: rectangle q_t minimum over the 21³
/// grid at t ∈ {0.05, 0.2} at least −1e-8 with tail bound < 1e-9.
#[test]
fn criterion_3_kernel_positivity() {
    let c = Criterion::begin("3 (kernel positivity)", 30.0);
    let spectrum = Spectrum::build(DomainSpec::rectangle(&[1.0]), 30).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for t in [0.05, 0.2] {
        let scan = spectrum.positivity_scan(t, 21, 25).unwrap();
        pass &= scan.min_value >= -1e-8 && scan.tail_bound < 1e-9;
        detail.push_str(&format!(
            "t={t}: min {:.3e} (≥ −1e-8), tail {:.3e} (< 1e-9); ",
            scan.min_value, scan.tail_bound
        ));
    }
    c.finish(pass, &detail);
}

/// Criterion 4 — common-maximizer falsification on the disk and annulus
/// (30 eigenpairs, tol 0.02), disk witnesses consistent with the radial
/// law within 2 grid cells, and the rectangle keeps the corner.
#[test]
fn criterion_4_common_maximizer_falsification() {
    let c = Criterion::begin("4 (common-maximizer falsification)", 60.0);
    let grid_n = 41;
    let mut pass = true;
    let mut detail = String::new();

    let disk = Spectrum::build(DomainSpec::Disk { radius: 1.0 }, 30).unwrap();
    let rep = common_maximizer_check(&disk, 30, 0.02, grid_n).unwrap();
    pass &= !rep.exists && rep.disjoint_pair.is_some();
    detail.push_str(&format!(
        "disk: exists={} witness_pair={:?}; ",
        rep.exists,
        rep.disjoint_pair.map(|(a, b)| {
            (disk.pairs()[a].index.to_string(), disk.pairs()[b].index.to_string())
        })
    ));
    // radial law r = (j'_{m,1}/j'_{m,k})·R within 2 grid cells, checked on
    // every angular class among the 30 pairs
    let cell = 1.0 / (grid_n as f64 - 1.0);
    let mut law_checked = 0;
    for class in &rep.per_class {
        if let (EigenIndex::Polar { m, k, .. }, Some(r)) =
            (&class.members[0], class.envelope_argmax_r)
        {
            if *m >= 1 {
                let table = jprime_zeros(*m, *k as usize).unwrap();
                let law = table.zero(1) / table.zero(*k as usize);
                if (r - law).abs() > 2.0 * cell {
                    pass = false;
                    detail.push_str(&format!(
                        "disk law violated for (m={m},k={k}): r={r:.4} vs {law:.4}; "
                    ));
                }
                law_checked += 1;
            }
        }
    }
    detail.push_str(&format!("{law_checked} disk classes match the radial law; "));

    let annulus = Spectrum::build(DomainSpec::Annulus { r0: 0.3, radius: 1.0 }, 30).unwrap();
    let rep = common_maximizer_check(&annulus, 30, 0.02, grid_n).unwrap();
    pass &= !rep.exists && rep.disjoint_pair.is_some();
    detail.push_str(&format!("annulus: exists={}; ", rep.exists));

    let rect = Spectrum::build(DomainSpec::rectangle(&[1.0, 2.0]), 30).unwrap();
    let rep = common_maximizer_check(&rect, 30, 0.02, 21).unwrap();
    let corner = rep.exists
        && rep.candidates.iter().any(|p| p[0].abs() < 1e-9 && p[1].abs() < 1e-9);
    pass &= corner;
    detail.push_str(&format!("rectangle: corner survives = {corner}"));
    c.finish(pass, &detail);
}

/// Independent fine-scan oracle with the stated 1e-4 step.
fn fine_scan_oracle<F: Fn(f64) -> f64>(f: F, start: f64, count: usize) -> Vec<f64> {
    let step = 1e-4;
    let mut out = Vec::with_capacity(count);
    let mut x = start;
    let mut fx = f(x);
    while out.len() < count {
        let xn = x + step;
        let fxn = f(xn);
        if fx.is_finite() && fxn.is_finite() && fx != 0.0 && fxn.signum() != fx.signum() {
            let (mut lo, mut hi) = (x, xn);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == f(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        x = xn;
        fx = fxn;
        assert!(x < 500.0, "oracle scan ran away");
    }
    out
}

/// Criterion 5 — Bessel zero tables against the independent fine-scan
/// oracle; every residual < 1e-10.
#[test]
fn criterion_5_bessel_zero_tables() {
    let c = Criterion::begin("5 (Bessel zero tables)", 20.0);
    let mut pass = true;
    let mut worst_dev = 0.0_f64;
    let mut worst_resid = 0.0_f64;
    for m in 0..=5u32 {
        let table = jprime_zeros(m, 20).unwrap();
        let start = if m == 0 { 0.5 } else { 0.8 * m as f64 };
        let oracle = fine_scan_oracle(|x| bessel_j_prime(m, x).unwrap(), start, 20);
        for (z, o) in table.zeros.iter().zip(&oracle) {
            worst_dev = worst_dev.max((z - o).abs());
            worst_resid = worst_resid.max(bessel_j_prime(m, *z).unwrap().abs());
        }
    }
    for m in 0..=3u32 {
        let table = annulus_cross_zeros(m, 0.3, 10).unwrap();
        let oracle = fine_scan_oracle(|x| annulus_cross(m, 0.3, x).unwrap(), 0.01, 10);
        for (z, o) in table.zeros.iter().zip(&oracle) {
            worst_dev = worst_dev.max((z - o).abs());
            worst_resid = worst_resid.max(annulus_cross(m, 0.3, *z).unwrap().abs());
        }
    }
    pass &= worst_dev < 1e-8 && worst_resid < 1e-10;
    c.finish(
        pass,
        &format!("max |zero − oracle| {worst_dev:.3e}, max residual {worst_resid:.3e} (< 1e-10)"),
    );
}

/// Criterion 6 — gradient-expansion experiment: finite eigen-polynomials
/// are reproduced below 1e-10 once all their modes are included; the
/// smooth bump's errors decrease monotonically along the doubling schedule
/// and its partial-sum gradient at the steepest sampled point converges to
/// a nonzero value.
#[test]
fn criterion_6_gradient_expansion() {
    let c = Criterion::begin("6 (gradient expansion)", 120.0);
    let spectrum = Spectrum::build(DomainSpec::rectangle(&[1.0, 2.0]), 420).unwrap();
    let mut pass = true;
    let mut detail = String::new();

    let combo = TestFunction::EigenCombo(vec![(2, 0.3), (7, 0.1)]);
    let rep = gradient_expansion_check(&spectrum, &combo, &[8, 16], 1025, 21).unwrap();
    pass &= rep.value_errors[0] < 1e-10 && rep.gradient_errors[0] < 1e-10;
    detail.push_str(&format!(
        "eigen-polynomial at count 8: value {:.2e}, gradient {:.2e} (< 1e-10); ",
        rep.value_errors[0], rep.gradient_errors[0]
    ));

    let bump = TestFunction::Bump { center: vec![0.4, 0.9], radius: 0.3, amplitude: 1.0 };
    let rep =
        gradient_expansion_check(&spectrum, &bump, &[50, 100, 200, 400], 1025, 41).unwrap();
    let monotone = rep.value_errors.windows(2).all(|w| w[1] <= w[0] + 1e-9)
        && rep.gradient_errors.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let oracle = norm(&rep.oracle_gradient_at_steepest);
    let partial = norm(&rep.partial_gradient_at_steepest);
    let nonzero = oracle > 0.1 && partial > 0.5 * oracle;
    pass &= monotone && nonzero;
    detail.push_str(&format!(
        "bump value errors {:?} and gradient errors {:?} monotone = {monotone}; \
         steepest-point gradient {partial:.3} vs oracle {oracle:.3} (nonzero = {nonzero})",
        rep.value_errors, rep.gradient_errors
    ));
    c.finish(pass, &detail);
}

/// Criterion 7 — Lévy-process suite: chi-square GOF of the simulated
/// marginal against the heat-kernel row at p > 0.01 (10^5 paths, t = 0.5),
/// martingale characterization (ii) at 4σ for the five leading modes, and
/// the Poisson / Lévy-Khintchine identities at 1e-9.
#[test]
fn criterion_7_levy_process_suite() {
    let c = Criterion::begin("7 (Lévy process suite)", 120.0);
    let betas = [1.0, 2.0];
    let table = rectangle_table(&betas, 21).unwrap();
    let grid = Grid::rectangle(&betas, 21).unwrap();
    let spectrum = Spectrum::build(DomainSpec::rectangle(&betas), 8).unwrap();
    let family = TrivializingFamily::rectangle(&spectrum, grid.clone(), 8).unwrap();
    let spec = SemigroupSpec::Heat(RectangleSemigroup::new(&betas, grid.clone()).unwrap());
    let mut pass = true;
    let mut detail = String::new();

    // marginal GOF at t = 0.5 from 10^5 paths of 5 steps
    let kernel = TransitionKernel::build(&table, &spec, 0.1).unwrap();
    let x0 = grid.index_of(&[0.5, 1.0]).unwrap();
    let finals = simulate_terminal_ensemble(&kernel, 5, x0, 42, 100_000);
    let mut counts = vec![0u64; grid.len()];
    for s in finals {
        counts[s] += 1;
    }
    let SemigroupSpec::Heat(sg) = &spec else { unreachable!() };
    let oracle = sg.transition_row(0.5, x0).unwrap();
    let gof = chi_square_gof(&counts, oracle.weights(), 100_000).unwrap();
    pass &= gof.p_value > 0.01;
    detail.push_str(&format!("GOF p = {:.4} (> 0.01, dof {}); ", gof.p_value, gof.dof));

    // martingale characterization (ii) for j ≤ 5
    let mut all_pass = true;
    for j in 0..5 {
        let rep =
            martingale_check(&table, &spec, &family, j, x0, 0.5, 10, 100_000, 13).unwrap();
        all_pass &= rep.pass;
    }
    pass &= all_pass;
    detail.push_str(&format!("martingale (ii) 4σ for j ≤ 5: {all_pass}; "));

    // Poisson semigroup identity in the jump measure
    let mut w1 = vec![0.0; grid.len()];
    w1[37] = 0.7;
    w1[251] = 0.4;
    let nu1 = DiscreteMeasure::new(grid.clone(), w1);
    let mut w2 = vec![0.0; grid.len()];
    w2[130] = 0.9;
    let nu2 = DiscreteMeasure::new(grid.clone(), w2);
    let lhs = table
        .convolve(&table.poisson(&nu1).unwrap(), &table.poisson(&nu2).unwrap())
        .unwrap();
    let rhs = table.poisson(&nu1.add(&nu2).unwrap()).unwrap();
    let tv = lhs.tv_distance(&rhs).unwrap();
    pass &= tv < 1e-9;
    detail.push_str(&format!("e(ν₁)⋄e(ν₂) vs e(ν₁+ν₂): TV {tv:.3e} (< 1e-9); "));

    // pure-Poisson Lévy-Khintchine identity
    let mut w = vec![0.0; grid.len()];
    for (i, v) in [(11usize, 0.31), (95, 0.22), (200, 0.17), (333, 0.4), (440, 0.09)] {
        w[i] = v;
    }
    let nu = DiscreteMeasure::new(grid.clone(), w);
    let lk = levy_khintchine_check(&table, &family, &nu).unwrap();
    pass &= lk < 1e-9;
    detail.push_str(&format!("Lévy-Khintchine max error {lk:.3e} (< 1e-9)"));
    c.finish(pass, &detail);
}

/// Figure-1 criterion — the annulus contour data: 12 CSV files whose
/// maximizer annotations match the inner/outer-circle pattern (first
/// radial zero of each angular order peaks at the outer circle, higher
/// zeros at the inner circle or interior).
#[test]
fn criterion_figure1_annulus_contours() {
    let c = Criterion::begin("8 (annulus contour data)", 60.0);
    let dir = tempfile::tempdir().unwrap();
    let spectrum = Spectrum::build(DomainSpec::Annulus { r0: 0.3, radius: 1.0 }, 12).unwrap();
    let manifest = contour::write_contours(&spectrum, 12, 101, dir.path()).unwrap();
    let mut pass = manifest.files.len() == 12;
    let mut detail = format!("{} contour files; ", manifest.files.len());
    for info in &manifest.files {
        let text = std::fs::read_to_string(dir.path().join(&info.file)).unwrap();
        pass &= text.starts_with("x,y,value\n") && text.lines().count() == 1 + 101 * 101;
        let EigenIndex::Polar { m, k, parity } = &info.index else {
            pass = false;
            continue;
        };
        let loc = info.maximizer.location.as_str();
        let ok = match (m, k) {
            (0, 0) => loc == "everywhere",
            (m, 1) if *m >= 1 => loc == "outer",
            (_, k) if *k >= 2 => loc == "inner" || loc == "interior",
            // radial modes peak at the inner circle or in the interior
            (0, _) => loc == "inner" || loc == "interior",
            _ => false,
        };
        if !ok {
            pass = false;
            detail.push_str(&format!(
                "unexpected annotation {loc} for (m={m},k={k},{parity:?}); "
            ));
        }
    }
    detail.push_str("annotations follow the outer/inner pattern");
    c.finish(pass, &detail);
}
