use thiserror::Error;

use crate::expr::ExprError;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("contour touches spectrum at z = {re}{im:+}i (pivot {pivot:.3e})")]
    ContourTouchesSpectrum { re: f64, im: f64, pivot: f64 },

    #[error("quadrature not converged with {nodes} nodes (change {change:.3e})")]
    QuadratureNotConverged { nodes: usize, change: f64 },

    #[error("roots not real to tolerance (imaginary part {imag:.3e})")]
    RootsNotReal { imag: f64 },

    #[error("numerical rank {rank} exceeds {limit}")]
    RankExceeds { rank: usize, limit: usize },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("box too large at t = {t}: projector rank {found} differs from {expected}")]
    BoxTooLarge { t: f64, expected: usize, found: usize },

    #[error("rank drift at t = {t}: enclosed count {found} differs from {expected}")]
    RankDrift { t: f64, expected: usize, found: usize },

    #[error("gap collapse unresolved near t = {t}: {detail}")]
    GapCollapse { t: f64, detail: String },

    #[error("vector is not an eigenvector (residual {residual:.3e})")]
    NotEigenvector { residual: f64 },

    #[error("counting condition violated at t = {t}, z = {z}")]
    CountingViolation { t: f64, z: f64 },

    #[error("underflow: scale 2^-(n^2) for n = {n} requires prefactor handling")]
    Underflow { n: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Expression(#[from] ExprError),
}

impl Error {
    /// True for failures caused by the numerics rather than the inputs'
    /// shape (the ones the CLI maps to exit status 3).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ContourTouchesSpectrum { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::RootsNotReal { .. }
                | Error::BoxTooLarge { .. }
                | Error::RankDrift { .. }
                | Error::GapCollapse { .. }
                | Error::Underflow { .. }
                | Error::NotEigenvector { .. }
                | Error::CountingViolation { .. }
                | Error::NotHermitian { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
