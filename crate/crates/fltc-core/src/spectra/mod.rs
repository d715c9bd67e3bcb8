//! Closed-form Neumann-Laplacian eigenpairs on the model domains.
//!
//! Eigenfunctions are stored in their raw closed form: cosine products on
//! the rectangle (value 1 at the corner, which is their sup), and
//! `R(r)·{cos, sin}(mθ)` on the circular domains. Each pair carries its
//! exact `L²` norm and a certified upper bound on its sup norm, so kernel
//! sums can be formed in any normalization.

mod expansion;
mod heat;
mod maximizers;
pub mod contour;
pub mod rectangle;

pub use expansion::{gradient_expansion_check, ExpansionReport, TestFunction};
pub use heat::{KernelEval, PositivityScan};
pub use maximizers::{
    common_maximizer_check, locate_maximizers, ClassReport, CommonMaximizerReport, MaximizerSet,
};

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::bessel::{
    annulus_cross_zeros, bessel_j, bessel_j_prime, bessel_y, bessel_y_prime, jprime_zeros,
    BesselZeroTable,
};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};

/// Angular parity of a circular-domain eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Cos,
    Sin,
}

/// Multi-index identifying a closed-form eigenfunction.
///
/// `Polar { m: 0, k: 0, .. }` and `Rect([0, …, 0])` denote the constant
/// eigenfunction (eigenvalue 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenIndex {
    Rect(Vec<u32>),
    Polar { m: u32, k: u32, parity: Parity },
}

impl std::fmt::Display for EigenIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EigenIndex::Rect(js) => {
                let s: Vec<String> = js.iter().map(|j| j.to_string()).collect();
                write!(f, "({})", s.join(","))
            }
            EigenIndex::Polar { m, k, parity } => {
                let p = if *parity == Parity::Cos { "cos" } else { "sin" };
                write!(f, "({m},{k},{p})")
            }
        }
    }
}

/// An eigenvalue with its closed-form eigenfunction data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenPair {
    pub index: EigenIndex,
    /// Eigenvalue of `−Δ` with Neumann boundary conditions.
    pub lambda: f64,
    /// `‖φ‖²_{L²}` of the stored form (closed form).
    pub l2_norm_sq: f64,
    /// Certified upper bound on `sup |φ|` of the stored form.
    pub sup_norm: f64,
    /// Radial frequency `z/R` (zero over outer radius); 0 for the constant
    /// and unused for the rectangle.
    pub(crate) alpha: f64,
    /// Cached annulus data: the cross-product zero `c` and the mixing
    /// coefficients of the radial cylinder function.
    pub(crate) cross_c: f64,
    pub(crate) y_prime_c: f64,
    pub(crate) j_prime_c: f64,
}

impl EigenPair {
    fn constant(domain: &DomainSpec) -> Self {
        EigenPair {
            index: match domain {
                DomainSpec::Rectangle { betas } => EigenIndex::Rect(vec![0; betas.len()]),
                _ => EigenIndex::Polar { m: 0, k: 0, parity: Parity::Cos },
            },
            lambda: 0.0,
            l2_norm_sq: domain.volume(),
            sup_norm: 1.0,
            alpha: 0.0,
            cross_c: 0.0,
            y_prime_c: 0.0,
            j_prime_c: 0.0,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.lambda == 0.0
    }

    /// Order of the radial Bessel factor (`m`, or `q·m` on the sector).
    fn radial_order(&self, domain: &DomainSpec) -> u32 {
        match (&self.index, domain) {
            (EigenIndex::Polar { m, .. }, DomainSpec::Sector { q, .. }) => m * q,
            (EigenIndex::Polar { m, .. }, _) => *m,
            _ => 0,
        }
    }

    /// Radial factor at radius `r` and its derivative in `r`.
    fn radial(&self, domain: &DomainSpec, r: f64) -> Result<(f64, f64)> {
        if self.is_constant() {
            return Ok((1.0, 0.0));
        }
        let mu = self.radial_order(domain);
        let z = self.alpha * r;
        match domain {
            DomainSpec::Disk { .. } | DomainSpec::Sector { .. } => Ok((
                bessel_j(mu, z)?,
                self.alpha * bessel_j_prime(mu, z)?,
            )),
            DomainSpec::Annulus { .. } => {
                let val = bessel_j(mu, z)? * self.y_prime_c - self.j_prime_c * bessel_y(mu, z)?;
                let der = bessel_j_prime(mu, z)? * self.y_prime_c
                    - self.j_prime_c * bessel_y_prime(mu, z)?;
                Ok((val, self.alpha * der))
            }
            DomainSpec::Rectangle { .. } => unreachable!("rectangle has no radial factor"),
        }
    }

    /// Evaluates the stored (raw closed-form) eigenfunction at a Cartesian
    /// point of the closed domain.
    pub fn eval(&self, domain: &DomainSpec, x: &[f64]) -> Result<f64> {
        if !domain.contains(x) {
            return Err(Error::PointOutsideDomain { message: format!("{x:?} ∉ {domain:?}") });
        }
        match (&self.index, domain) {
            (EigenIndex::Rect(js), DomainSpec::Rectangle { betas }) => {
                let mut v = 1.0;
                for ((&j, &b), &xi) in js.iter().zip(betas).zip(x) {
                    v *= (std::f64::consts::PI * j as f64 * xi / b).cos();
                }
                Ok(v)
            }
            (EigenIndex::Polar { m, parity, .. }, _) => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let theta = if r == 0.0 { 0.0 } else { x[1].atan2(x[0]) };
                let (rad, _) = self.radial(domain, r)?;
                let mu_ang = match domain {
                    DomainSpec::Sector { q, .. } => (m * q) as f64,
                    _ => *m as f64,
                };
                let ang = match parity {
                    Parity::Cos => (mu_ang * theta).cos(),
                    Parity::Sin => (mu_ang * theta).sin(),
                };
                Ok(rad * ang)
            }
            _ => Err(Error::Parameter {
                context: "EigenPair::eval",
                message: "index kind does not match domain".into(),
            }),
        }
    }

    /// `φ/‖φ‖₂` at the point (orthonormal normalization).
    pub fn eval_orthonormal(&self, domain: &DomainSpec, x: &[f64]) -> Result<f64> {
        Ok(self.eval(domain, x)? / self.l2_norm_sq.sqrt())
    }

    /// Cartesian gradient of the stored eigenfunction. Polar charts are
    /// differentiated by the chart rule
    /// `∇φ = R'A e_r + (R A'/r) e_θ`, with the series limits at `r = 0`.
    pub fn eval_gradient(&self, domain: &DomainSpec, x: &[f64]) -> Result<Vec<f64>> {
        if !domain.contains(x) {
            return Err(Error::PointOutsideDomain { message: format!("{x:?} ∉ {domain:?}") });
        }
        match (&self.index, domain) {
            (EigenIndex::Rect(js), DomainSpec::Rectangle { betas }) => {
                let d = betas.len();
                let mut grad = vec![0.0; d];
                for (k, gk) in grad.iter_mut().enumerate() {
                    let mut g = 1.0;
                    for i in 0..d {
                        let w = std::f64::consts::PI * js[i] as f64 / betas[i];
                        if i == k {
                            g *= -w * (w * x[i]).sin();
                        } else {
                            g *= (w * x[i]).cos();
                        }
                    }
                    *gk = g;
                }
                Ok(grad)
            }
            (EigenIndex::Polar { m, parity, .. }, _) => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let scale = match domain {
                    DomainSpec::Disk { radius } | DomainSpec::Sector { radius, .. } => *radius,
                    DomainSpec::Annulus { radius, .. } => *radius,
                    DomainSpec::Rectangle { .. } => unreachable!(),
                };
                let mu_ang = match domain {
                    DomainSpec::Sector { q, .. } => m * q,
                    _ => *m,
                };
                if r < 1e-12 * scale {
                    // limits at the origin from J_μ(z) ~ (z/2)^μ/μ!
                    return Ok(match (mu_ang, parity) {
                        (1, Parity::Cos) => vec![0.5 * self.alpha, 0.0],
                        (1, Parity::Sin) => vec![0.0, 0.5 * self.alpha],
                        _ => vec![0.0, 0.0],
                    });
                }
                let theta = x[1].atan2(x[0]);
                let (rad, drad) = self.radial(domain, r)?;
                let (ang, dang) = match parity {
                    Parity::Cos => (
                        (mu_ang as f64 * theta).cos(),
                        -(mu_ang as f64) * (mu_ang as f64 * theta).sin(),
                    ),
                    Parity::Sin => (
                        (mu_ang as f64 * theta).sin(),
                        mu_ang as f64 * (mu_ang as f64 * theta).cos(),
                    ),
                };
                let (ct, st) = (theta.cos(), theta.sin());
                let fr = drad * ang;
                let ft = rad * dang / r;
                Ok(vec![fr * ct - ft * st, fr * st + ft * ct])
            }
            _ => Err(Error::Parameter {
                context: "EigenPair::eval_gradient",
                message: "index kind does not match domain".into(),
            }),
        }
    }
}

/// A domain together with its lowest `count` eigenpairs, sorted by
/// eigenvalue (ties resolved by index for determinism).
#[derive(Debug, Clone)]
pub struct Spectrum {
    domain: DomainSpec,
    pairs: Vec<EigenPair>,
}

impl Spectrum {
    /// Builds the spectrum with the `count` smallest eigenvalues, listing
    /// tied eigenvalues with their full multiplicity (so slightly more than
    /// `count` entries can be returned).
    pub fn build(domain: DomainSpec, count: usize) -> Result<Self> {
        let pairs = eigenpairs(&domain, count)?;
        Ok(Spectrum { domain, pairs })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn eval(&self, j: usize, x: &[f64]) -> Result<f64> {
        self.pairs[j].eval(&self.domain, x)
    }

    pub fn eval_gradient(&self, j: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.pairs[j].eval_gradient(&self.domain, x)
    }

    /// Groups pair indices into multiplicity classes of equal eigenvalue
    /// (relative tolerance 1e-9), preserving eigenvalue order.
    pub fn multiplicity_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, p) in self.pairs.iter().enumerate() {
            if let Some(last) = classes.last_mut() {
                let l0 = self.pairs[last[0]].lambda;
                if (p.lambda - l0).abs() <= 1e-9 * l0.max(1.0) {
                    last.push(i);
                    continue;
                }
            }
            classes.push(vec![i]);
        }
        classes
    }

    /// Eigenvalue counting function `N(λ) = #{j : λ_j ≤ λ}` over the
    /// computed range.
    pub fn counting_function(&self, lambda: f64) -> usize {
        self.pairs.iter().take_while(|p| p.lambda <= lambda).count()
    }
}

/// Heap entry ordered ascending by eigenvalue, then by index for
/// deterministic tie order.
struct Candidate {
    lambda: f64,
    order: Vec<u32>,
    pair: EigenPair,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda && self.order == other.order
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we want the smallest eigenvalue
        other
            .lambda
            .partial_cmp(&self.lambda)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// The `count` smallest Neumann eigenpairs of the domain, ties listed with
/// full multiplicity. Enumeration is exhaustive by construction: candidates
/// are produced from a monotone frontier, so no eigenvalue below the cutoff
/// can be skipped.
pub fn eigenpairs(domain: &DomainSpec, count: usize) -> Result<Vec<EigenPair>> {
    domain.validate()?;
    if count == 0 || count > 2000 {
        return Err(Error::Parameter {
            context: "eigenpairs",
            message: format!("count = {count} not in 1..=2000"),
        });
    }
    match domain {
        DomainSpec::Rectangle { betas } => rect_eigenpairs(betas, count),
        _ => polar_eigenpairs(domain, count),
    }
}

fn rect_pair(betas: &[f64], js: &[u32]) -> EigenPair {
    let mut lambda = 0.0;
    let mut norm = 1.0;
    for (&j, &b) in js.iter().zip(betas) {
        lambda += (std::f64::consts::PI * j as f64 / b).powi(2);
        norm *= if j == 0 { b } else { 0.5 * b };
    }
    EigenPair {
        index: EigenIndex::Rect(js.to_vec()),
        lambda,
        l2_norm_sq: norm,
        sup_norm: 1.0,
        alpha: 0.0,
        cross_c: 0.0,
        y_prime_c: 0.0,
        j_prime_c: 0.0,
    }
}

fn rect_eigenpairs(betas: &[f64], count: usize) -> Result<Vec<EigenPair>> {
    let d = betas.len();
    let mut heap = BinaryHeap::new();
    let seed = vec![0u32; d];
    heap.push(Candidate { lambda: 0.0, order: seed.clone(), pair: rect_pair(betas, &seed) });
    let mut out: Vec<EigenPair> = Vec::with_capacity(count + 8);
    while let Some(cand) = heap.pop() {
        let done = out.len() >= count
            && cand.lambda > out.last().unwrap().lambda * (1.0 + 1e-9) + 1e-12;
        if done {
            break;
        }
        // successor rule: coordinate k may be incremented only when all
        // later coordinates are zero, which generates each index once
        for k in 0..d {
            if cand.order[k + 1..].iter().all(|&j| j == 0) {
                let mut next = cand.order.clone();
                next[k] += 1;
                let pair = rect_pair(betas, &next);
                heap.push(Candidate { lambda: pair.lambda, order: next, pair });
            }
        }
        out.push(cand.pair);
    }
    Ok(out)
}

/// Per-angular-order ladder of radial zeros for a circular domain.
struct Family {
    m: u32,
    table: BesselZeroTable,
}

impl Family {
    fn fetch(domain: &DomainSpec, m: u32, count: usize) -> Result<Self> {
        let table = match domain {
            DomainSpec::Disk { .. } => jprime_zeros(m, count)?,
            DomainSpec::Sector { q, .. } => jprime_zeros(m * q, count)?,
            DomainSpec::Annulus { r0, radius } => {
                annulus_cross_zeros(m, r0 / radius, count)?
            }
            DomainSpec::Rectangle { .. } => unreachable!(),
        };
        Ok(Family { m, table })
    }

    fn zero(&mut self, domain: &DomainSpec, k: u32) -> Result<f64> {
        while self.table.len() < k as usize {
            let want = (self.table.len() + 32).max(k as usize);
            *self = Family::fetch(domain, self.m, want)?;
        }
        Ok(self.table.zero(k as usize))
    }
}

fn polar_pair(domain: &DomainSpec, m: u32, k: u32, parity: Parity, z: f64) -> Result<EigenPair> {
    let radius = match domain {
        DomainSpec::Disk { radius }
        | DomainSpec::Sector { radius, .. }
        | DomainSpec::Annulus { radius, .. } => *radius,
        DomainSpec::Rectangle { .. } => unreachable!(),
    };
    let lambda = (z / radius) * (z / radius);
    let mut pair = EigenPair {
        index: EigenIndex::Polar { m, k, parity },
        lambda,
        l2_norm_sq: 0.0,
        sup_norm: 0.0,
        alpha: z / radius,
        cross_c: z,
        y_prime_c: 0.0,
        j_prime_c: 0.0,
    };
    let mu = pair.radial_order(domain);
    if let DomainSpec::Annulus { .. } = domain {
        pair.y_prime_c = bessel_y_prime(m, z)?;
        pair.j_prime_c = bessel_j_prime(m, z)?;
    }

    // closed-form L² norms: angular factor × Lommel radial integral
    let msq = (mu as f64) * (mu as f64);
    match domain {
        DomainSpec::Disk { radius } => {
            let ang = if m == 0 { 2.0 * std::f64::consts::PI } else { std::f64::consts::PI };
            let jz = bessel_j(mu, z)?;
            pair.l2_norm_sq = ang * 0.5 * radius * radius * (1.0 - msq / (z * z)) * jz * jz;
        }
        DomainSpec::Sector { q, radius } => {
            let base = std::f64::consts::PI / *q as f64;
            let ang = if m == 0 { base } else { 0.5 * base };
            let jz = bessel_j(mu, z)?;
            pair.l2_norm_sq = ang * 0.5 * radius * radius * (1.0 - msq / (z * z)) * jz * jz;
        }
        DomainSpec::Annulus { r0, radius } => {
            let ang = if m == 0 { 2.0 * std::f64::consts::PI } else { std::f64::consts::PI };
            let rho = r0 / radius;
            // cylinder function value at the outer edge is the Wronskian 2/(πz)
            let c_outer = 2.0 / (std::f64::consts::PI * z);
            let c_inner =
                bessel_j(m, rho * z)? * pair.y_prime_c - pair.j_prime_c * bessel_y(m, rho * z)?;
            let outer = 0.5 * radius * radius * (1.0 - msq / (z * z)) * c_outer * c_outer;
            let inner = 0.5 * r0 * r0 * (1.0 - msq / (rho * z * rho * z)) * c_inner * c_inner;
            pair.l2_norm_sq = ang * (outer - inner);
        }
        DomainSpec::Rectangle { .. } => unreachable!(),
    }

    // certified sup bound: radial grid max plus a Lipschitz slack term
    let (r_lo, r_hi) = match domain {
        DomainSpec::Annulus { r0, radius } => (*r0, *radius),
        DomainSpec::Disk { radius } | DomainSpec::Sector { radius, .. } => (0.0, *radius),
        DomainSpec::Rectangle { .. } => unreachable!(),
    };
    let n = 2000;
    let h = (r_hi - r_lo) / n as f64;
    let mut max_val = 0.0_f64;
    let mut max_der = 0.0_f64;
    for i in 0..=n {
        let r = r_lo + i as f64 * h;
        let (v, dv) = pair.radial(domain, r)?;
        max_val = max_val.max(v.abs());
        max_der = max_der.max(dv.abs());
    }
    pair.sup_norm = max_val + 0.75 * h * max_der;
    Ok(pair)
}

fn polar_eigenpairs(domain: &DomainSpec, count: usize) -> Result<Vec<EigenPair>> {
    let mut out: Vec<EigenPair> = vec![EigenPair::constant(domain)];
    let mut families: Vec<Family> = vec![Family::fetch(domain, 0, 16)?];
    let mut heap: BinaryHeap<Candidate> = BinaryHeap::new();

    let make = |families: &mut Vec<Family>, fam: usize, k: u32| -> Result<Candidate> {
        let m = families[fam].m;
        let z = families[fam].zero(domain, k)?;
        let pair = polar_pair(domain, m, k, Parity::Cos, z)?;
        Ok(Candidate { lambda: pair.lambda, order: vec![m, k], pair })
    };
    let head = make(&mut families, 0, 1)?;
    heap.push(head);

    while let Some(cand) = heap.pop() {
        let (m, k) = (cand.order[0], cand.order[1]);
        // A family's first element may only be emitted once the next family
        // is active, because first radial eigenvalues increase with the
        // angular order; activate it and re-pop so the frontier min stays
        // correct.
        if k == 1 && m as usize + 1 == families.len() {
            families.push(Family::fetch(domain, m + 1, 16)?);
            let fam = families.len() - 1;
            let head = make(&mut families, fam, 1)?;
            heap.push(head);
            heap.push(cand);
            continue;
        }
        if out.len() >= count
            && cand.lambda > out.last().unwrap().lambda * (1.0 + 1e-9) + 1e-12
        {
            break;
        }
        let next = make(&mut families, m as usize, k + 1)?;
        heap.push(next);

        let has_sine = match domain {
            DomainSpec::Sector { .. } => false,
            _ => m >= 1,
        };
        if has_sine {
            let mut sin_pair = cand.pair.clone();
            sin_pair.index = EigenIndex::Polar { m, k, parity: Parity::Sin };
            out.push(cand.pair);
            out.push(sin_pair);
        } else {
            out.push(cand.pair);
        }
    }
    Ok(out)
}
