//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the numerical routines.
///
/// Scientific *findings* (kernel positivity failure, missing common
/// maximizer) are not errors: they are carried in result structs. Only
/// contract violations and convergence failures surface here.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// Argument outside the validated parameter range.
    #[error("parameter out of validated range in {context}: {message}")]
    Parameter { context: &'static str, message: String },

    /// A root search failed to converge; the offending bracket is reported.
    #[error("root search failed in {context}: bracket [{lo}, {hi}], {message}")]
    Convergence {
        context: &'static str,
        lo: f64,
        hi: f64,
        message: String,
    },

    /// An eigenvalue bracket was missed; oscillation counts are reported.
    #[error("eigenvalue bracket miss for index {index}: oscillation counts {osc_lo} at λ={lambda_lo}, {osc_hi} at λ={lambda_hi}")]
    BracketMiss {
        index: usize,
        lambda_lo: f64,
        lambda_hi: f64,
        osc_lo: usize,
        osc_hi: usize,
    },

    /// Adaptive ODE integration could not meet the local tolerance.
    #[error("ODE integrator step failure at x={x}: {message}")]
    IntegratorStep { x: f64, message: String },

    /// Requested truncation tolerance is unreachable for the given mode count.
    #[error("tail tolerance unreachable: bound {bound} > tolerance {tolerance} with {count} modes at t={t}")]
    TailUnreachable {
        t: f64,
        count: usize,
        bound: f64,
        tolerance: f64,
    },

    /// Two measures (or a measure and a table) live on different grids.
    #[error("grid mismatch in {context}")]
    GridMismatch { context: &'static str },

    /// A grid is not closed under the reflection map of the interval hypergroup.
    #[error("grid not closed under reflection: pair ({x}, {y}) maps to {image} which is not a grid point")]
    GridNotReflectionClosed { x: f64, y: f64, image: f64 },

    /// A signed measure was passed where a positive one is required.
    #[error("signed input in {context}: negative weight {weight} at index {index}")]
    SignedInput {
        context: &'static str,
        weight: f64,
        index: usize,
    },

    /// A transition row is not a probability vector (propagated positivity finding).
    #[error("non-probability row in {context}: mass {mass}, min weight {min_weight}")]
    NonProbabilityRow {
        context: &'static str,
        mass: f64,
        min_weight: f64,
    },

    /// Evaluation point lies outside the closed domain.
    #[error("point outside domain: {message}")]
    PointOutsideDomain { message: String },

    /// Quadrature refinement failed to converge.
    #[error("quadrature did not converge in {context}: last correction {correction}")]
    QuadratureNonconvergence { context: &'static str, correction: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
