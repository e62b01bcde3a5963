//! Differentiable eigenvalue branches: one-sided derivatives at crossings,
//! derivative matching, gluing over a grid, Gronwall screening and the
//! completion of partial parameterizations.

pub mod branches;
pub mod extend;
pub mod gronwall;
pub mod local;
pub mod matching;

pub use branches::{track_branches, track_on_grid, uniform_grid, BranchSet, Crossing};
pub use extend::{counting_defect, extend_parameterization, Extension};
pub use gronwall::{estimate_gronwall_constant, gronwall_screen, GronwallReport, GronwallViolation, PairSelection};
pub use local::{compressed_derivative, one_sided_derivatives, range_basis, rayleigh_derivative, OneSided, Side};
pub use matching::{match_crossing, MatchReport, Order};
