//! Numerical thresholds used across the crate.
//!
//! Defaults are the `f64` values; each is floored by a multiple of machine
//! epsilon so the same struct is usable for `f32`.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative Hermiticity defect accepted on input matrices.
    pub hermitian: T,
    /// Relative residual target of the eigensolver.
    pub eig: T,
    /// Relative residual target of shifted solves.
    pub solve: T,
    /// Idempotency / Hermiticity threshold for contour projectors, and the
    /// quadrature convergence threshold between `M` and `2M` nodes.
    pub proj: T,
    /// Relative tolerance for recovered cluster eigenvalues.
    pub recover: T,
    /// Relative imaginary-part tolerance on Newton sums.
    pub imag: T,
    /// Relative imaginary-part tolerance on companion-matrix roots.
    pub root_imag: T,
    /// Relative gap below which eigenvalues count as colliding.
    pub cluster: T,
    /// Accepted one-sided derivative mismatch at crossings.
    pub deriv: T,
    /// Relative tie threshold grouping equal first derivatives.
    pub deriv_tie: T,
    /// Step for first-derivative finite differences (scaled by `max(1,|t|)`).
    pub h_fd: T,
    /// Step for second-derivative finite differences.
    pub h_fd2: T,
    /// Minimal distance from the contour to the spectrum, as a fraction of
    /// the radius.
    pub separation_margin: T,
    /// Relative pivot magnitude below which a shifted solve is singular.
    pub resolvent_guard: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            hermitian: T::tol(1e-10, 100.0),
            eig: T::tol(1e-10, 100.0),
            solve: T::tol(1e-10, 100.0),
            proj: T::tol(1e-10, 1e3),
            recover: T::tol(1e-7, 1e4),
            imag: T::tol(1e-8, 1e3),
            root_imag: T::tol(1e-5, 1e5),
            cluster: T::tol(1e-6, 1e4),
            deriv: T::tol(1e-6, 1e5),
            deriv_tie: T::tol(1e-5, 1e5),
            h_fd: T::tol(1e-5, 4e4),
            h_fd2: T::tol(1e-4, 2e5),
            separation_margin: T::lit(0.1),
            resolvent_guard: T::tol(1e-13, 1e3),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// First-derivative step at parameter `t`.
    pub fn step(&self, t: T) -> T {
        self.h_fd * T::one().max(t.abs())
    }

    /// Second-derivative step at parameter `t`.
    pub fn step2(&self, t: T) -> T {
        self.h_fd2 * T::one().max(t.abs())
    }
}
