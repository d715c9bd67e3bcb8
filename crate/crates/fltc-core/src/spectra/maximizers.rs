//! Maximizer location and the common-maximizer check.
//!
//! A convolution structure forces every trivializing eigenfunction to peak
//! at one common point, so falsification amounts to showing the
//! `(1−tol)`-maximizer sets of the eigenvalue classes have empty
//! intersection. Two-dimensional eigenspaces on the disk and annulus are
//! handled through the rotation envelope `sup_α |cos α·φ_c + sin α·φ_s| =
//! |R(r)|`, which makes the test basis-independent; the cos/sin basis and
//! eight rotated combinations are still reported as diagnostics.

use serde::Serialize;

use super::{EigenIndex, Parity, Spectrum};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};

/// All near-maximal points of one eigenfunction.
#[derive(Debug, Clone, Serialize)]
pub struct MaximizerSet {
    /// Cartesian points with `|φ| ≥ (1−tol)·max|φ|`; symmetry orbits are
    /// not collapsed.
    pub points: Vec<Vec<f64>>,
    pub max_abs: f64,
}

/// Per-multiplicity-class diagnostics of the common-maximizer check.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub lambda: f64,
    pub members: Vec<EigenIndex>,
    pub class_max: f64,
    /// Radius of the radial-envelope maximum (circular domains only).
    pub envelope_argmax_r: Option<f64>,
    pub survivors_after: usize,
    /// Survivor counts under the cos/sin basis and 8 rotated combinations
    /// (2-dimensional classes only).
    pub rotation_survivors: Option<Vec<usize>>,
}

/// Outcome of intersecting maximizer sets over the leading eigenpairs.
#[derive(Debug, Clone, Serialize)]
pub struct CommonMaximizerReport {
    pub exists: bool,
    /// Surviving candidate points (Cartesian), capped at 128 entries.
    pub candidates: Vec<Vec<f64>>,
    pub candidate_count: usize,
    /// Ordinal (in eigenvalue order) and representative index of the first
    /// class that emptied the intersection.
    pub witness_class: Option<usize>,
    pub witness_index: Option<EigenIndex>,
    /// Candidates that were alive just before the witness class emptied
    /// the intersection (capped at 64).
    pub last_candidates: Vec<Vec<f64>>,
    /// Indices into the pair list of two eigenpairs whose maximizer sets
    /// are disjoint (falsification witness pair).
    pub disjoint_pair: Option<(usize, usize)>,
    pub per_class: Vec<ClassReport>,
    pub tol: f64,
    pub grid_n: usize,
}

fn domain_scale(domain: &DomainSpec) -> f64 {
    match domain {
        DomainSpec::Rectangle { betas } => betas.iter().cloned().fold(0.0, f64::max),
        DomainSpec::Disk { radius }
        | DomainSpec::Sector { radius, .. }
        | DomainSpec::Annulus { radius, .. } => *radius,
    }
}

fn project(domain: &DomainSpec, x: &[f64]) -> Vec<f64> {
    match domain {
        DomainSpec::Rectangle { betas } => x
            .iter()
            .zip(betas)
            .map(|(&xi, &b)| xi.clamp(0.0, b))
            .collect(),
        DomainSpec::Disk { radius } => {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r > *radius {
                vec![x[0] * radius / r, x[1] * radius / r]
            } else {
                x.to_vec()
            }
        }
        DomainSpec::Annulus { r0, radius } => {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r < 1e-300 {
                return vec![*r0, 0.0];
            }
            let rc = r.clamp(*r0, *radius);
            vec![x[0] * rc / r, x[1] * rc / r]
        }
        DomainSpec::Sector { q, radius } => {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt().min(*radius);
            let theta = if r == 0.0 { 0.0 } else { x[1].atan2(x[0]) };
            let th = theta.clamp(0.0, std::f64::consts::PI / *q as f64);
            vec![r * th.cos(), r * th.sin()]
        }
    }
}

/// Projected gradient ascent on φ² from a starting point.
fn ascend(spec: &Spectrum, j: usize, start: &[f64]) -> Result<Vec<f64>> {
    let domain = spec.domain();
    let scale = domain_scale(domain);
    let mut x = start.to_vec();
    let mut f0 = spec.eval(j, &x)?.powi(2);
    let mut eta = 0.05 * scale;
    for _ in 0..200 {
        let phi = spec.eval(j, &x)?;
        let grad = spec.eval_gradient(j, &x)?;
        let g: Vec<f64> = grad.iter().map(|gi| 2.0 * phi * gi).collect();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn < 1e-14 {
            break;
        }
        let mut step = eta;
        let mut advanced = false;
        while step > 1e-13 * scale {
            let xn: Vec<f64> =
                x.iter().zip(&g).map(|(&xi, &gi)| xi + step * gi / gn).collect();
            let xn = project(domain, &xn);
            let f1 = spec.eval(j, &xn)?.powi(2);
            if f1 > f0 * (1.0 + 1e-15) + 1e-300 {
                x = xn;
                f0 = f1;
                eta = 1.3 * step;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    Ok(x)
}

/// Grid search followed by local gradient-ascent refinement for all points
/// where `|φ_j| ≥ (1−tol)·max|φ_j|`.
pub fn locate_maximizers(
    spec: &Spectrum,
    j: usize,
    grid_n: usize,
    tol: f64,
) -> Result<MaximizerSet> {
    if !(tol > 0.0 && tol <= 0.1) {
        return Err(Error::Parameter {
            context: "locate_maximizers",
            message: format!("tol = {tol} not in (0, 0.1]"),
        });
    }
    let samples = spec.domain().sample_points(grid_n);
    let mut vals = Vec::with_capacity(samples.len());
    let mut vmax = 0.0_f64;
    for (xy, _) in &samples {
        let v = spec.eval(j, xy)?.abs();
        vmax = vmax.max(v);
        vals.push(v);
    }
    if spec.pairs()[j].is_constant() {
        return Ok(MaximizerSet {
            points: samples.into_iter().map(|(xy, _)| xy).collect(),
            max_abs: vmax,
        });
    }
    let mut refined: Vec<(Vec<f64>, f64)> = Vec::new();
    for (i, (xy, _)) in samples.iter().enumerate() {
        if vals[i] >= (1.0 - tol) * vmax {
            let p = ascend(spec, j, xy)?;
            let v = spec.eval(j, &p)?.abs();
            vmax = vmax.max(v);
            refined.push((p, v));
        }
    }
    let points = refined
        .into_iter()
        .filter(|(_, v)| *v >= (1.0 - tol) * vmax)
        .map(|(p, _)| p)
        .collect();
    Ok(MaximizerSet { points, max_abs: vmax })
}

/// Maximum of the radial envelope `|R(r)|` of a circular-domain pair over
/// the radial interval, with its argmax: 2000-point grid plus a local
/// golden-section polish.
pub(crate) fn radial_envelope_max(spec: &Spectrum, j: usize) -> Result<(f64, f64)> {
    let domain = spec.domain();
    let (r_lo, r_hi) = match domain {
        DomainSpec::Annulus { r0, radius } => (*r0, *radius),
        DomainSpec::Disk { radius } | DomainSpec::Sector { radius, .. } => (0.0, *radius),
        DomainSpec::Rectangle { .. } => {
            return Err(Error::Parameter {
                context: "radial_envelope_max",
                message: "rectangle has no radial envelope".into(),
            })
        }
    };
    let pair = &spec.pairs()[j];
    let n = 2000;
    let h = (r_hi - r_lo) / n as f64;
    let mut best = (0.0_f64, r_lo);
    for i in 0..=n {
        let r = r_lo + i as f64 * h;
        let (v, _) = pair.radial(domain, r)?;
        if v.abs() > best.0 {
            best = (v.abs(), r);
        }
    }
    // golden-section polish inside the bracketing cells
    let (mut a, mut b) = ((best.1 - h).max(r_lo), (best.1 + h).min(r_hi));
    let inv_phi = 0.618_033_988_749_894_9;
    for _ in 0..60 {
        let c = b - inv_phi * (b - a);
        let d = a + inv_phi * (b - a);
        let fc = pair.radial(domain, c)?.0.abs();
        let fd = pair.radial(domain, d)?.0.abs();
        if fc > fd {
            b = d;
        } else {
            a = c;
        }
    }
    let r = 0.5 * (a + b);
    Ok((pair.radial(domain, r)?.0.abs().max(best.0), r))
}

struct ClassData {
    members: Vec<usize>,
    class_max: f64,
    env_argmax: Option<f64>,
}

impl ClassData {
    /// Candidate score: what the best admissible in-class combination can
    /// reach at the point. Rectangle classes require every max-normalized
    /// basis member to peak (min over members); two-dimensional circular
    /// classes use the rotation envelope `|R(r)|`.
    fn score(&self, spec: &Spectrum, xy: &[f64], chart: &[f64]) -> Result<f64> {
        match spec.domain() {
            DomainSpec::Rectangle { .. } => {
                let mut s = f64::INFINITY;
                for &m in &self.members {
                    s = s.min(spec.eval(m, xy)?.abs());
                }
                Ok(s)
            }
            _ => {
                if self.members.len() >= 2 {
                    let pair = &spec.pairs()[self.members[0]];
                    Ok(pair.radial(spec.domain(), chart[0])?.0.abs())
                } else {
                    Ok(spec.eval(self.members[0], xy)?.abs())
                }
            }
        }
    }
}

/// Intersects the `(1−tol)`-maximizer sets of the leading multiplicity
/// classes. On falsification the report carries the first class that
/// emptied the intersection and a disjoint pair of eigenpairs.
pub fn common_maximizer_check(
    spec: &Spectrum,
    count: usize,
    tol: f64,
    grid_n: usize,
) -> Result<CommonMaximizerReport> {
    if !(tol > 0.0 && tol <= 0.1) || count == 0 {
        return Err(Error::Parameter {
            context: "common_maximizer_check",
            message: format!("need tol ∈ (0, 0.1] and count ≥ 1, got tol = {tol}, count = {count}"),
        });
    }
    let count = count.min(spec.len());
    let classes: Vec<Vec<usize>> = spec
        .multiplicity_classes()
        .into_iter()
        .filter(|c| c[0] < count)
        .collect();

    let samples = spec.domain().sample_points(grid_n);
    let mut class_data = Vec::with_capacity(classes.len());
    for members in &classes {
        let (class_max, env_argmax) = match spec.domain() {
            DomainSpec::Rectangle { .. } => (1.0, None),
            _ => {
                if spec.pairs()[members[0]].is_constant() {
                    (1.0, None)
                } else {
                    let (m, r) = radial_envelope_max(spec, members[0])?;
                    (m, Some(r))
                }
            }
        };
        class_data.push(ClassData { members: members.clone(), class_max, env_argmax });
    }

    // survivor bitsets per class over the sample grid
    let mut survive: Vec<Vec<bool>> = Vec::with_capacity(classes.len());
    for cd in &class_data {
        let mut s = Vec::with_capacity(samples.len());
        for (xy, chart) in &samples {
            s.push(cd.score(spec, xy, chart)? >= (1.0 - tol) * cd.class_max);
        }
        survive.push(s);
    }

    let mut alive: Vec<bool> = vec![true; samples.len()];
    let mut witness_class = None;
    let mut last_candidates: Vec<Vec<f64>> = Vec::new();
    let mut per_class = Vec::with_capacity(classes.len());
    for (ci, cd) in class_data.iter().enumerate() {
        let before = alive.clone();
        for i in 0..samples.len() {
            alive[i] = alive[i] && survive[ci][i];
        }
        let after = alive.iter().filter(|&&a| a).count();
        if after == 0 && witness_class.is_none() {
            witness_class = Some(ci);
            last_candidates = (0..samples.len())
                .filter(|&i| before[i])
                .take(64)
                .map(|i| samples[i].0.clone())
                .collect();
        }
        // rotation diagnostics for 2-dimensional classes
        let rotation_survivors = if cd.members.len() >= 2
            && !matches!(spec.domain(), DomainSpec::Rectangle { .. })
        {
            let (ic, is) = (cd.members[0], cd.members[1]);
            debug_assert!(matches!(
                spec.pairs()[is].index,
                EigenIndex::Polar { parity: Parity::Sin, .. }
            ));
            let mut counts = Vec::with_capacity(10);
            for bi in 0..10 {
                let alpha = match bi {
                    0 => 0.0,
                    1 => std::f64::consts::FRAC_PI_2,
                    _ => (bi - 1) as f64 * std::f64::consts::PI / 8.0,
                };
                let mut n = 0;
                for (i, (xy, _)) in samples.iter().enumerate() {
                    if !before[i] {
                        continue;
                    }
                    let v = alpha.cos() * spec.eval(ic, xy)? + alpha.sin() * spec.eval(is, xy)?;
                    if v.abs() >= (1.0 - tol) * cd.class_max {
                        n += 1;
                    }
                }
                counts.push(n);
            }
            Some(counts)
        } else {
            None
        };
        per_class.push(ClassReport {
            lambda: spec.pairs()[cd.members[0]].lambda,
            members: cd.members.iter().map(|&m| spec.pairs()[m].index.clone()).collect(),
            class_max: cd.class_max,
            envelope_argmax_r: cd.env_argmax,
            survivors_after: after,
            rotation_survivors,
        });
    }

    let exists = alive.iter().any(|&a| a);
    let candidates: Vec<Vec<f64>> = (0..samples.len())
        .filter(|&i| alive[i])
        .take(128)
        .map(|i| samples[i].0.clone())
        .collect();
    let candidate_count = alive.iter().filter(|&&a| a).count();

    let mut disjoint_pair = None;
    if !exists {
        'outer: for c2 in 0..classes.len() {
            for c1 in 0..c2 {
                let empty = (0..samples.len()).all(|i| !(survive[c1][i] && survive[c2][i]));
                if empty {
                    disjoint_pair = Some((classes[c1][0], classes[c2][0]));
                    break 'outer;
                }
            }
        }
    }

    Ok(CommonMaximizerReport {
        exists,
        candidates,
        candidate_count,
        witness_class,
        witness_index: witness_class.map(|ci| spec.pairs()[classes[ci][0]].index.clone()),
        last_candidates,
        disjoint_pair,
        per_class,
        tol,
        grid_n,
    })
}
