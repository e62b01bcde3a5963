//! Finite sections of a family that is weakly `C¹` but not differentiable
//! in operator norm: `A(t) = diag(n + λ_1(n t))`, `n = 1..m`.

use crate::error::{Error, Result};
use crate::family::HermitianFamily;
use crate::linalg::Matrix;
use crate::scalar::Real;

/// `exp(1 - 1/(1 - (s-1)²))` on `(0, 2)`, zero elsewhere; `λ_1(1) = 1` and
/// `λ_1` is flat at `0`.
pub fn bump(s: f64) -> f64 {
    let q = 1.0 - (s - 1.0) * (s - 1.0);
    if q > 0.0 {
        (1.0 - 1.0 / q).exp()
    } else {
        0.0
    }
}

pub fn bump_deriv(s: f64) -> f64 {
    let q = 1.0 - (s - 1.0) * (s - 1.0);
    if q > 0.0 {
        bump(s) * (-2.0 * (s - 1.0)) / (q * q)
    } else {
        0.0
    }
}

/// `m x m` section, diagonal entries `n + λ_1(n t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventExampleFamily {
    m: usize,
}

impl ResolventExampleFamily {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("truncation must be at least 1".into()));
        }
        Ok(Self { m })
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    /// Entry `n` of `B(t)`: `1 + λ_1(n t)/n`.
    pub fn b_entry(n: usize, t: f64) -> f64 {
        1.0 + bump(n as f64 * t) / n as f64
    }
}

impl<T: Real> HermitianFamily<T> for ResolventExampleFamily {
    fn dim(&self) -> usize {
        self.m
    }

    fn eval(&self, t: T) -> Result<Matrix<T>> {
        let t = t.as_f64();
        let d: Vec<T> = (1..=self.m).map(|n| T::lit(n as f64 + bump(n as f64 * t))).collect();
        Ok(Matrix::from_real_diag(&d))
    }

    fn deriv(&self, t: T) -> Option<Result<Matrix<T>>> {
        let t = t.as_f64();
        let d: Vec<T> = (1..=self.m)
            .map(|n| T::lit(n as f64 * bump_deriv(n as f64 * t)))
            .collect();
        Some(Ok(Matrix::from_real_diag(&d)))
    }

    fn name(&self) -> &str {
        "resolvent-example"
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![("m".into(), self.m.to_string())]
    }
}

/// Difference-quotient defects of `B` at `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakVsNorm {
    /// `max_{n <= K} |μ_n(t)|`: goes to zero as `t -> 0`.
    pub pointwise_max: f64,
    /// `max_{n <= m} |μ_n(t)|`: the operator-norm defect.
    pub norm_quotient: f64,
}

/// `μ_n(t) = (B_n(t) - B_n(0))/t - B_n'(0) = λ_1(n t)/(n t)` for the chosen
/// bump `profile`.
pub fn resolvent_weak_vs_norm_with(profile: impl Fn(f64) -> f64, m: usize, t: f64, k: usize) -> Result<WeakVsNorm> {
    if m == 0 || k == 0 || t == 0.0 {
        return Err(Error::InvalidArgument("need m >= 1, K >= 1 and t != 0".into()));
    }
    let mu = |n: usize| {
        let s = n as f64 * t;
        (profile(s) / s).abs()
    };
    let max_over = |upto: usize| (1..=upto).map(mu).fold(0.0, f64::max);
    Ok(WeakVsNorm {
        pointwise_max: max_over(k.min(m)),
        norm_quotient: max_over(m),
    })
}

pub fn resolvent_weak_vs_norm(m: usize, t: f64, k: usize) -> Result<WeakVsNorm> {
    resolvent_weak_vs_norm_with(bump, m, t, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        assert_eq!(bump(0.0), 0.0);
        assert_eq!(bump(2.0), 0.0);
        assert!((bump(1.0) - 1.0).abs() < 1e-15);
        assert!(bump(1e-3) < 1e-200);
        let h = 1e-6;
        for s in [0.3, 1.0, 1.7] {
            let fd = (bump(s + h) - bump(s - h)) / (2.0 * h);
            assert!((fd - bump_deriv(s)).abs() < 1e-6);
        }
    }

    #[test]
    fn norm_quotient_at_reciprocals() {
        for n in 2..=50 {
            let r = resolvent_weak_vs_norm(200, 1.0 / n as f64, 5).unwrap();
            assert!(r.norm_quotient >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn pointwise_goes_to_zero() {
        let vals: Vec<f64> = (4..20)
            .map(|j| resolvent_weak_vs_norm(200, 2f64.powi(-j), 5).unwrap().pointwise_max)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        assert!(resolvent_weak_vs_norm(200, 1e-3, 5).unwrap().pointwise_max < 1e-3);
    }

    #[test]
    fn zero_profile() {
        let r = resolvent_weak_vs_norm_with(|_| 0.0, 10, 0.1, 5).unwrap();
        assert_eq!((r.pointwise_max, r.norm_quotient), (0.0, 0.0));
    }

    #[test]
    fn section_entries() {
        let f = ResolventExampleFamily::new(3).unwrap();
        let a: Matrix<f64> = f.eval(0.5).unwrap();
        assert!((a[(1, 1)].re - 3.0).abs() < 1e-15);
        assert!((ResolventExampleFamily::b_entry(2, 0.5) - 1.5).abs() < 1e-15);
    }
}
