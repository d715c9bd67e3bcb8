//! Stress probe at the documented parameter limits. Ignored by default:
//! run with `cargo test --release --test limits_probe -- --ignored --nocapture`.

use std::time::Instant;

use fltc_core::{DomainSpec, SLProblem, Spectrum};

#[test]
#[ignore]
fn enumeration_at_parameter_limits() {
    let t0 = Instant::now();
    let s = Spectrum::build(DomainSpec::Disk { radius: 1.0 }, 500).unwrap();
    println!("disk 500 pairs: {:?} (λ_max = {:.1})", t0.elapsed(), s.pairs().last().unwrap().lambda);

    let t0 = Instant::now();
    let s = Spectrum::build(DomainSpec::Annulus { r0: 0.3, radius: 1.0 }, 300).unwrap();
    println!("annulus 300 pairs: {:?} (λ_max = {:.1})", t0.elapsed(), s.pairs().last().unwrap().lambda);

    let t0 = Instant::now();
    let s = Spectrum::build(DomainSpec::rectangle(&[1.0, 2.0]), 2000).unwrap();
    println!("rectangle 2000 pairs: {:?} (λ_max = {:.1})", t0.elapsed(), s.pairs().last().unwrap().lambda);

    let p = SLProblem::cosine(1.0);
    let t0 = Instant::now();
    let spec = fltc_core::sturm::neumann_eigenvalues(&p, 100).unwrap();
    println!("SL 100 eigenvalues: {:?} (λ_max = {:.1})", t0.elapsed(), spec.lambdas.last().unwrap());
}
