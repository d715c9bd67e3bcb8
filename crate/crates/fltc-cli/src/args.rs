//! Command-line arguments. Every command's argument struct also derives
//! `Deserialize` with identical field names, so `run --config file.json`
//! accepts the same schema as the flags.

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Subcommand, Deserialize, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Eigenvalue table and per-eigenfunction contour data.
    Eigen(EigenArgs),
    /// Grid minimization of the product-formula kernel q_t.
    KernelScan(KernelScanArgs),
    /// Common-maximizer check over the leading eigenpairs.
    Maximizers(MaximizersArgs),
    /// One convolution row ν_{x,y}, from the exact reflection table or the
    /// monitored t ↓ 0 limit.
    Convolve(ConvolveArgs),
    /// Full FLTC axiom suite on the rectangle algebra.
    Axioms(AxiomsArgs),
    /// ⋄-Lévy path simulation with goodness-of-fit and martingale checks.
    Simulate(SimulateArgs),
    /// Eigenfunction/gradient expansion convergence experiment.
    ExpandGradient(ExpandGradientArgs),
    /// Run any command from a JSON config with the same schema.
    Run(RunArgs),
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct DomainArgs {
    /// Domain shape: rectangle | disk | sector | annulus.
    #[arg(long)]
    pub domain: String,
    /// Rectangle side lengths (comma separated).
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
    /// Outer radius (disk, sector, annulus).
    #[arg(long = "R")]
    #[serde(default, rename = "R")]
    pub radius: Option<f64>,
    /// Inner radius (annulus).
    #[arg(long)]
    #[serde(default)]
    pub r0: Option<f64>,
    /// Sector opening is π/q.
    #[arg(long)]
    #[serde(default)]
    pub q: Option<u32>,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct OutArgs {
    /// Output directory; defaults to `$FLTC_OUTPUT_ROOT/<command>` or
    /// `./out/<command>`.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct EigenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    /// Number of eigenvalues.
    #[arg(long)]
    pub count: usize,
    /// Contour grid points per axis (2-D domains).
    #[arg(long, default_value_t = 41)]
    #[serde(default = "default_grid_contour")]
    pub grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct KernelScanArgs {
    /// Rectangle side lengths.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Times to scan (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    /// Scan grid points per axis.
    #[arg(long, default_value_t = 21)]
    #[serde(default = "default_grid_scan")]
    pub grid: usize,
    /// Number of modes in the truncated kernel.
    #[arg(long, default_value_t = 30)]
    #[serde(default = "default_modes")]
    pub count: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct MaximizersArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    /// Number of leading eigenpairs to intersect.
    #[arg(long)]
    pub count: usize,
    /// Near-maximality tolerance.
    #[arg(long, default_value_t = 0.02)]
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Sample grid points per axis.
    #[arg(long, default_value_t = 41)]
    #[serde(default = "default_grid_contour")]
    pub grid: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct ConvolveArgs {
    /// Interval length (1-D) or rectangle sides.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 21)]
    #[serde(default = "default_grid_scan")]
    pub grid: usize,
    /// First Dirac position (comma separated coordinates).
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    /// Second Dirac position.
    #[arg(long, value_delimiter = ',')]
    pub y: Vec<f64>,
    /// `table` (exact reflection rows) or `limit` (monitored t ↓ 0 product
    /// measure, 1-D only).
    #[arg(long, default_value = "table")]
    #[serde(default = "default_method")]
    pub method: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct AxiomsArgs {
    /// Rectangle side lengths.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 21)]
    #[serde(default = "default_grid_scan")]
    pub grid: usize,
    /// Semigroup times to test (pairwise sums are added automatically).
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    /// Size of the trivializing family.
    #[arg(long, default_value_t = 25)]
    #[serde(default = "default_modes_axioms")]
    pub modes: usize,
    /// Random trials for the algebra identities.
    #[arg(long, default_value_t = 50)]
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct SimulateArgs {
    /// Rectangle side lengths.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 21)]
    #[serde(default = "default_grid_scan")]
    pub grid: usize,
    /// Horizon time.
    #[arg(long, default_value_t = 0.5)]
    #[serde(default = "default_horizon")]
    pub t: f64,
    /// Steps per path.
    #[arg(long, default_value_t = 5)]
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Number of paths written to CSV.
    #[arg(long, default_value_t = 100)]
    #[serde(default = "default_paths")]
    pub paths: usize,
    /// Extra paths for the goodness-of-fit marginal test (0 disables).
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "default_gof_paths")]
    pub gof_paths: usize,
    /// Start position (coordinates; defaults to the grid center).
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    /// Jump measure atoms `index:weight` for the ⋄-Poisson semigroup
    /// instead of the diffusion.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub jump: Option<Vec<String>>,
    #[arg(long)]
    pub seed: u64,
    /// Martingale checks for modes j < this bound.
    #[arg(long, default_value_t = 5)]
    #[serde(default = "default_martingale_modes")]
    pub martingale_modes: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct ExpandGradientArgs {
    /// Rectangle side lengths.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Partial-sum counts (ascending).
    #[arg(long, value_delimiter = ',')]
    pub counts: Vec<usize>,
    /// Eigen-combination test function, entries `index:coefficient`.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub combo: Option<Vec<String>>,
    /// Bump center (comma separated); used when no combo is given.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub bump_center: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.3)]
    #[serde(default = "default_bump_radius")]
    pub bump_radius: f64,
    /// Quadrature points per axis for the coefficients.
    #[arg(long, default_value_t = 1025)]
    #[serde(default = "default_quad")]
    pub quad: usize,
    /// Sample grid per axis for the sup-norm errors.
    #[arg(long, default_value_t = 41)]
    #[serde(default = "default_grid_contour")]
    pub sample: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Deserialize, Serialize)]
pub struct RunArgs {
    /// JSON file holding one command object with the same field names as
    /// the flags.
    #[arg(long)]
    pub config: PathBuf,
}

fn default_grid_contour() -> usize {
    41
}
fn default_grid_scan() -> usize {
    21
}
fn default_modes() -> usize {
    30
}
fn default_modes_axioms() -> usize {
    25
}
fn default_trials() -> usize {
    50
}
fn default_seed() -> u64 {
    7
}
fn default_tol() -> f64 {
    0.02
}
fn default_method() -> String {
    "table".into()
}
fn default_horizon() -> f64 {
    0.5
}
fn default_steps() -> usize {
    5
}
fn default_paths() -> usize {
    100
}
fn default_gof_paths() -> usize {
    100_000
}
fn default_martingale_modes() -> usize {
    5
}
fn default_bump_radius() -> f64 {
    0.3
}
fn default_quad() -> usize {
    1025
}
