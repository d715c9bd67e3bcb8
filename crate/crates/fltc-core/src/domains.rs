//! Model domains with closed-form Neumann eigenfunctions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four model domains. Lengths are strictly positive; the
/// annulus requires `r0 < radius`; the sector has opening angle `π/q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DomainSpec {
    Rectangle { betas: Vec<f64> },
    Disk { radius: f64 },
    Sector { q: u32, radius: f64 },
    Annulus { r0: f64, radius: f64 },
}

impl DomainSpec {
    pub fn rectangle(betas: &[f64]) -> Self {
        DomainSpec::Rectangle { betas: betas.to_vec() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            DomainSpec::Rectangle { betas } => {
                !betas.is_empty() && betas.iter().all(|&b| b > 0.0 && b.is_finite())
            }
            DomainSpec::Disk { radius } => *radius > 0.0,
            DomainSpec::Sector { q, radius } => *q >= 1 && *radius > 0.0,
            DomainSpec::Annulus { r0, radius } => *r0 > 0.0 && r0 < radius,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter {
                context: "DomainSpec::validate",
                message: format!("invalid domain parameters: {self:?}"),
            })
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Rectangle { betas } => betas.len(),
            _ => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            DomainSpec::Rectangle { betas } => betas.iter().product(),
            DomainSpec::Disk { radius } => std::f64::consts::PI * radius * radius,
            DomainSpec::Sector { q, radius } => {
                0.5 * std::f64::consts::PI / *q as f64 * radius * radius
            }
            DomainSpec::Annulus { r0, radius } => {
                std::f64::consts::PI * (radius * radius - r0 * r0)
            }
        }
    }

    /// Membership in the closed domain, with a small tolerance so that
    /// boundary points produced by floating-point charts are accepted.
    pub fn contains(&self, x: &[f64]) -> bool {
        const TOL: f64 = 1e-9;
        if x.len() != self.dim() {
            return false;
        }
        match self {
            DomainSpec::Rectangle { betas } => x
                .iter()
                .zip(betas)
                .all(|(&xi, &b)| xi >= -TOL * b && xi <= b * (1.0 + TOL)),
            DomainSpec::Disk { radius } => {
                (x[0] * x[0] + x[1] * x[1]).sqrt() <= radius * (1.0 + TOL)
            }
            DomainSpec::Sector { q, radius } => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                if r > radius * (1.0 + TOL) {
                    return false;
                }
                if r < TOL * radius {
                    return true; // apex
                }
                let theta = x[1].atan2(x[0]);
                let alpha = std::f64::consts::PI / *q as f64;
                theta >= -TOL && theta <= alpha + TOL
            }
            DomainSpec::Annulus { r0, radius } => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                r >= r0 * (1.0 - TOL) && r <= radius * (1.0 + TOL)
            }
        }
    }

    /// Tensor sample of the closed domain in its natural chart, `n` points
    /// per axis. Returns `(cartesian, chart)` pairs; the chart coordinates
    /// are the Cartesian ones for the rectangle and `(r, θ)` otherwise.
    /// For the periodic angular axis of the disk and annulus the endpoint
    /// `2π` is not duplicated.
    pub fn sample_points(&self, n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
        assert!(n >= 2);
        match self {
            DomainSpec::Rectangle { betas } => {
                let mut out = Vec::new();
                let mut idx = vec![0usize; betas.len()];
                loop {
                    let p: Vec<f64> = idx
                        .iter()
                        .zip(betas)
                        .map(|(&i, &b)| b * i as f64 / (n - 1) as f64)
                        .collect();
                    out.push((p.clone(), p));
                    let mut k = betas.len();
                    loop {
                        if k == 0 {
                            return out;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < n {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
            DomainSpec::Disk { radius } => {
                polar_samples(0.0, *radius, 0.0, 2.0 * std::f64::consts::PI, n, true)
            }
            DomainSpec::Sector { q, radius } => {
                polar_samples(0.0, *radius, 0.0, std::f64::consts::PI / *q as f64, n, false)
            }
            DomainSpec::Annulus { r0, radius } => {
                polar_samples(*r0, *radius, 0.0, 2.0 * std::f64::consts::PI, n, true)
            }
        }
    }
}

fn polar_samples(
    r_lo: f64,
    r_hi: f64,
    th_lo: f64,
    th_hi: f64,
    n: usize,
    periodic: bool,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n_theta = n;
    let denom = if periodic { n_theta as f64 } else { (n_theta - 1) as f64 };
    let mut out = Vec::with_capacity(n * n_theta);
    for i in 0..n {
        let r = r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64;
        for j in 0..n_theta {
            let theta = th_lo + (th_hi - th_lo) * j as f64 / denom;
            out.push((vec![r * theta.cos(), r * theta.sin()], vec![r, theta]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        assert!((DomainSpec::rectangle(&[1.0, 2.0]).volume() - 2.0).abs() < 1e-15);
        assert!((DomainSpec::Disk { radius: 1.0 }.volume() - std::f64::consts::PI).abs() < 1e-15);
        assert!(
            (DomainSpec::Sector { q: 2, radius: 1.0 }.volume() - std::f64::consts::PI / 4.0).abs()
                < 1e-15
        );
        let a = DomainSpec::Annulus { r0: 0.3, radius: 1.0 };
        assert!((a.volume() - std::f64::consts::PI * (1.0 - 0.09)).abs() < 1e-15);
    }

    #[test]
    fn membership() {
        let d = DomainSpec::Disk { radius: 1.0 };
        assert!(d.contains(&[0.0, 0.0]));
        assert!(d.contains(&[1.0, 0.0]));
        assert!(!d.contains(&[1.01, 0.0]));

        let s = DomainSpec::Sector { q: 2, radius: 1.0 };
        assert!(s.contains(&[0.5, 0.5])); // 45° inside the 90° sector
        assert!(!s.contains(&[0.5, -0.1]));

        let a = DomainSpec::Annulus { r0: 0.3, radius: 1.0 };
        assert!(!a.contains(&[0.1, 0.0]));
        assert!(a.contains(&[-0.5, 0.0]));
    }

    #[test]
    fn samples_lie_in_domain() {
        for d in [
            DomainSpec::rectangle(&[1.0, 2.0]),
            DomainSpec::Disk { radius: 1.0 },
            DomainSpec::Sector { q: 3, radius: 2.0 },
            DomainSpec::Annulus { r0: 0.3, radius: 1.0 },
        ] {
            for (xy, _) in d.sample_points(9) {
                assert!(d.contains(&xy), "{d:?} ∌ {xy:?}");
            }
        }
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(DomainSpec::Rectangle { betas: vec![] }.validate().is_err());
        assert!(DomainSpec::Rectangle { betas: vec![-1.0] }.validate().is_err());
        assert!(DomainSpec::Annulus { r0: 1.0, radius: 0.5 }.validate().is_err());
        assert!(DomainSpec::Sector { q: 0, radius: 1.0 }.validate().is_err());
    }
}
