//! Differentiable eigenvalue branches of parameterized Hermitian families.
//!
//! The crate tracks the eigenvalues of `t -> A(t)` so that branches stay
//! differentiable through crossings. It provides the supporting machinery
//! (Riesz projectors, power sums, one-sided derivative matching, branch
//! gluing, Gronwall screening) and executable counterexamples showing the
//! limits of that regularity.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the CLI uses.

pub mod config;
pub mod contour;
pub mod error;
pub mod expr;
pub mod family;
pub mod gallery;
pub mod linalg;
pub mod output;
pub mod run;
pub mod scalar;
pub mod tolerances;
pub mod tracker;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = linalg::Matrix<f64>;
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;
pub type Contour = contour::Contour<f64>;
pub type SpectralCluster = contour::SpectralCluster<f64>;
pub type BranchSet = tracker::BranchSet<f64>;
pub type MatchReport = tracker::MatchReport<f64>;
pub type Tolerances = tolerances::Tolerances<f64>;
