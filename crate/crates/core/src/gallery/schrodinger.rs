//! `-u'' + V(t, x) u` on `(0, 1)` with Dirichlet ends, three-point
//! differences on `m` interior nodes.

use crate::error::{Error, Result};
use crate::expr::{Expression, Var};
use crate::family::HermitianFamily;
use crate::linalg::Matrix;
use crate::scalar::{Cplx, Real};
use crate::tolerances::Tolerances;
use crate::tracker::{track_branches, BranchSet, Order};

#[derive(Debug, Clone)]
pub struct SchrodingerFamily {
    m: usize,
    potential: Expression,
}

impl SchrodingerFamily {
    pub fn new(potential: &str, m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidArgument("need at least 3 interior nodes".into()));
        }
        Ok(Self {
            m,
            potential: Expression::parse_with(potential, &[Var::T, Var::X])?,
        })
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.m as f64 + 1.0)
    }

    /// Interior nodes `x_j = j h`.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.m).map(|j| j as f64 * h).collect()
    }

    pub fn potential(&self) -> &Expression {
        &self.potential
    }

    /// `(4/h²) sin²(kπh/2) = (2/h²)(1 - cos kπh)`, `k = 1..m`: the spectrum
    /// without potential.
    pub fn free_eigenvalues(m: usize) -> Vec<f64> {
        let h = 1.0 / (m as f64 + 1.0);
        (1..=m)
            .map(|k| {
                let s = (k as f64 * std::f64::consts::PI * h / 2.0).sin();
                4.0 * s * s / (h * h)
            })
            .collect()
    }
}

impl<T: Real> HermitianFamily<T> for SchrodingerFamily {
    fn dim(&self) -> usize {
        self.m
    }

    fn eval(&self, t: T) -> Result<Matrix<T>> {
        let h = self.spacing();
        let inv = 1.0 / (h * h);
        let tf = t.as_f64();
        let mut a = Matrix::zeros(self.m, self.m);
        for (j, &x) in self.nodes().iter().enumerate() {
            let (v, im) = self.potential.eval_real(tf, x)?;
            if im.abs() > 1e-12 * (1.0 + v.abs()) {
                return Err(Error::NotHermitian { defect: im.abs() });
            }
            a[(j, j)] = Cplx::new(T::lit(2.0 * inv + v), T::zero());
            if j + 1 < self.m {
                a[(j, j + 1)] = Cplx::new(T::lit(-inv), T::zero());
                a[(j + 1, j)] = Cplx::new(T::lit(-inv), T::zero());
            }
        }
        Ok(a)
    }

    fn name(&self) -> &str {
        "schrodinger"
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            ("m".into(), self.m.to_string()),
            ("potential".into(), self.potential.source().to_string()),
        ]
    }
}

/// Tracks the eigenvalue branches of the discretized operator.
pub fn schrodinger_track(
    potential: &str,
    m: usize,
    t_range: (f64, f64),
    grid_size: usize,
    order: Order,
    tol: &Tolerances<f64>,
) -> Result<BranchSet<f64>> {
    let f = SchrodingerFamily::new(potential, m)?;
    track_branches(&f, t_range, grid_size, order, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    #[test]
    fn free_spectrum() {
        let f = SchrodingerFamily::new("0", 99).unwrap();
        let e = hermitian_eig::<f64>(&f.eval(0.0).unwrap()).unwrap();
        let exact = SchrodingerFamily::free_eigenvalues(99);
        for (a, b) in e.eigenvalues.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-9 * b, "{a} {b}");
        }
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((e.eigenvalues[0] - pi2).abs() < 1e-3 * pi2);
    }

    #[test]
    fn constant_shift_has_unit_slopes() {
        let b = schrodinger_track("t", 8, (0.0, 1.0), 5, Order::First, &Tolerances::default()).unwrap();
        let free = SchrodingerFamily::free_eigenvalues(8);
        for (k, &t) in b.grid.iter().enumerate() {
            for j in 0..8 {
                assert!((b.values[k][j] - free[j] - t).abs() < 1e-9 * free[j]);
                assert!((b.derivs[k][j] - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_small_grids_and_bad_potentials() {
        assert!(SchrodingerFamily::new("0", 2).is_err());
        assert!(SchrodingerFamily::new("y", 5).is_err());
        let f = SchrodingerFamily::new("i*x", 5).unwrap();
        assert!(HermitianFamily::<f64>::eval(&f, 0.0).is_err());
    }
}
