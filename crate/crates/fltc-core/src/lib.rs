//! Numerical toolkit for constructing and falsifying convolution-like
//! structures (Feller-Lévy trivializable convolutions, FLTCs) attached to
//! diffusion semigroups.
//!
//! The crate computes Neumann eigenpairs on model domains (rectangle, disk,
//! circular sector, annulus), evaluates the regularized product-formula
//! kernel `q_t`, builds discrete convolution measure algebras where the
//! kernel is positive, simulates the associated ⋄-Lévy processes, and runs
//! the falsification experiments (common-maximizer failure, uniform
//! gradient expansions) that rule such structures out on curved domains.

// negated float comparisons like `!(x > 0.0)` are deliberate: they reject
// NaN, which the suggested `x <= 0.0` would silently accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod domains;
pub mod error;
pub mod grid;
pub mod levy;
pub mod measure;
pub mod rootfind;
pub mod spectra;
pub mod sturm;

pub use error::{Error, Result};
pub use domains::DomainSpec;
pub use grid::{Axis, Grid};
pub use measure::{ConvolutionTable, DiscreteMeasure, TrivializingFamily};
pub use spectra::{eigenpairs, EigenIndex, EigenPair, Parity, Spectrum};
pub use sturm::{Coefficient, SLProblem, SLSpectrum};
