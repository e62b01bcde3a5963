//! Smooth 2x2 family whose eigenvalues are twice differentiable but not
//! `C^{1,α}` for any `α > 0`, and whose normalized eigenvectors jump.
//!
//! Around `t_n = 4 Σ_{k≤n} 1/k²` the family equals
//! `A_n(s) = 2^{-n²} [[1, s/s_n], [s/s_n, -1]]` for `|s| ≤ 1/n²`, with
//! `s_n = 2^{n-n²}`. Between windows the neighbouring models are blended
//! with a flat smooth step.

use crate::error::{Error, Result};
use crate::family::HermitianFamily;
use crate::linalg::{hermitian_eig, inner, vec_norm, Matrix};
use crate::scalar::{Cplx, Real};
use crate::tolerances::Tolerances;
use crate::tracker::{track_on_grid, Order};

/// Largest window index: beyond it `2^{-n²}` leaves the `f64` range.
pub const MAX_WINDOW: u32 = 30;

/// Largest window index handled without prefactor separation.
pub const MAX_UNSCALED_WINDOW: u32 = 15;

pub fn t_n(n: u32) -> f64 {
    4.0 * (1..=n).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>()
}

pub fn half_width(n: u32) -> f64 {
    1.0 / (n as f64 * n as f64)
}

/// `s_n = 2^{n - n²}`.
pub fn s_n(n: u32) -> f64 {
    let n = n as f64;
    (n - n * n).exp2()
}

/// `2^{-n²}`.
pub fn scale_n(n: u32) -> f64 {
    let n = n as f64;
    (-n * n).exp2()
}

/// `A_n(s)` at true scale.
fn model<T: Real>(n: u32, s: T) -> Matrix<T> {
    let c = T::lit(scale_n(n));
    let off = s * T::lit((-(n as f64)).exp2());
    Matrix::from_real_rows(&[&[c, off], &[off, -c]])
}

fn model_deriv<T: Real>(n: u32) -> Matrix<T> {
    let off = T::lit((-(n as f64)).exp2());
    Matrix::from_real_rows(&[&[T::zero(), off], &[off, T::zero()]])
}

fn flat<T: Real>(x: T) -> T {
    if x > T::zero() {
        (-x.recip()).exp()
    } else {
        T::zero()
    }
}

/// Smooth step: 0 near `u <= 0`, 1 near `u >= 1`, all derivatives vanish
/// at both ends. Returns `(ψ(u), ψ'(u))`.
fn step<T: Real>(u: T) -> (T, T) {
    let (a, b) = (flat(u), flat(T::one() - u));
    let d = a + b;
    let da = if u > T::zero() { a / (u * u) } else { T::zero() };
    let v = T::one() - u;
    let db = if v > T::zero() { b / (v * v) } else { T::zero() };
    (a / d, (da * b + a * db) / (d * d))
}

/// The glued family on windows `n_min..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveLemmaFamily {
    n_min: u32,
    n_max: u32,
}

enum Where {
    Window(u32),
    Gap(u32, f64, f64),
}

impl CurveLemmaFamily {
    pub fn new(n_min: u32, n_max: u32) -> Result<Self> {
        if n_min < 2 {
            return Err(Error::InvalidArgument(
                "windows start at n = 2 (window 1 overlaps window 2)".into(),
            ));
        }
        if n_max < n_min || n_max > MAX_WINDOW {
            return Err(Error::InvalidArgument(format!(
                "window range {n_min}..={n_max} must be ordered and end by {MAX_WINDOW}"
            )));
        }
        Ok(Self { n_min, n_max })
    }

    pub fn n_min(&self) -> u32 {
        self.n_min
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Parameter interval covered by the windows.
    pub fn range(&self) -> (f64, f64) {
        (
            t_n(self.n_min) - half_width(self.n_min),
            t_n(self.n_max) + half_width(self.n_max),
        )
    }

    /// Unit-scale model of window `n` as a family in `s`.
    pub fn window(n: u32) -> WindowFamily {
        WindowFamily { n }
    }

    fn locate(&self, t: f64) -> Where {
        let mut n = self.n_min;
        if t <= t_n(n) + half_width(n) {
            return Where::Window(n);
        }
        while n < self.n_max {
            let right = t_n(n) + half_width(n);
            let next = t_n(n + 1) - half_width(n + 1);
            if t < next {
                return Where::Gap(n, (t - right) / (next - right), next - right);
            }
            n += 1;
            if t <= t_n(n) + half_width(n) {
                return Where::Window(n);
            }
        }
        Where::Window(self.n_max)
    }
}

impl<T: Real> HermitianFamily<T> for CurveLemmaFamily {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, t: T) -> Result<Matrix<T>> {
        let tf = t.as_f64();
        Ok(match self.locate(tf) {
            Where::Window(n) => model(n, t - T::lit(t_n(n))),
            Where::Gap(n, u, _) => {
                let (p, _) = step(T::lit(u));
                let mut a = model(n, t - T::lit(t_n(n))).scale(T::one() - p);
                let b = model(n + 1, t - T::lit(t_n(n + 1)));
                a.axpy(Cplx::new(p, T::zero()), &b);
                a
            }
        })
    }

    fn deriv(&self, t: T) -> Option<Result<Matrix<T>>> {
        let tf = t.as_f64();
        Some(Ok(match self.locate(tf) {
            Where::Window(n) => model_deriv(n),
            Where::Gap(n, u, len) => {
                let (p, dp) = step(T::lit(u));
                let a = model::<T>(n, t - T::lit(t_n(n)));
                let b = model::<T>(n + 1, t - T::lit(t_n(n + 1)));
                let mut d = model_deriv::<T>(n).scale(T::one() - p);
                d.axpy(Cplx::new(p, T::zero()), &model_deriv(n + 1));
                d.axpy(Cplx::new(dp / T::lit(len), T::zero()), &(&b - &a));
                d
            }
        }))
    }

    fn name(&self) -> &str {
        "curve-lemma"
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            ("n_min".into(), self.n_min.to_string()),
            ("n_max".into(), self.n_max.to_string()),
        ]
    }
}

/// `[[1, s/s_n], [s/s_n, -1]]` with prefactor `2^{-n²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowFamily {
    pub n: u32,
}

impl<T: Real> HermitianFamily<T> for WindowFamily {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, s: T) -> Result<Matrix<T>> {
        let x = s / T::lit(s_n(self.n));
        Ok(Matrix::from_real_rows(&[&[T::one(), x], &[x, -T::one()]]))
    }

    fn deriv(&self, _s: T) -> Option<Result<Matrix<T>>> {
        let x = T::one() / T::lit(s_n(self.n));
        Some(Ok(Matrix::from_real_rows(&[&[T::zero(), x], &[x, T::zero()]])))
    }

    fn deriv2(&self, _s: T) -> Option<Result<Matrix<T>>> {
        Some(Ok(Matrix::zeros(2, 2)))
    }

    fn scale_prefactor(&self) -> Option<T> {
        Some(T::lit(scale_n(self.n)))
    }

    fn name(&self) -> &str {
        "curve-lemma-window"
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![("n".into(), self.n.to_string())]
    }
}

/// The same window evaluated at true scale, without a prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct UnscaledWindow {
    n: u32,
}

impl<T: Real> HermitianFamily<T> for UnscaledWindow {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, s: T) -> Result<Matrix<T>> {
        Ok(model(self.n, s))
    }

    fn deriv(&self, _s: T) -> Option<Result<Matrix<T>>> {
        Some(Ok(model_deriv(self.n)))
    }

    fn name(&self) -> &str {
        "curve-lemma-window-unscaled"
    }
}

/// Closed form `2^{n(α(n-1)-1)} / √2`.
pub fn holder_closed_form(n: u32, alpha: f64) -> f64 {
    let n = n as f64;
    (n * (alpha * (n - 1.0) - 1.0)).exp2() / std::f64::consts::SQRT_2
}

/// `λ_n'(s) = 2^{n²-2n} s / √(1 + (s/s_n)²)` for the upper branch.
pub fn window_slope(n: u32, s: f64) -> f64 {
    let nf = n as f64;
    let x = s / s_n(n);
    (nf * nf - 2.0 * nf).exp2() * s / (1.0 + x * x).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderQuotient {
    pub n: u32,
    pub alpha: f64,
    pub closed_form: f64,
    /// From the tracked derivative of the upper branch at `s = 0, s_n`.
    pub numerical: f64,
    /// From the displayed derivative formula.
    pub analytic: f64,
    pub relative_difference: f64,
}

/// `(λ'(t_n + s_n) - λ'(t_n)) / s_n^α` for the upper branch, in closed form
/// and from tracked branches of window `n`.
///
/// With `use_prefactor` the window is tracked at unit scale and rescaled;
/// without it, windows beyond [`MAX_UNSCALED_WINDOW`] are refused.
pub fn holder_quotient<T: Real>(n: u32, alpha: f64, use_prefactor: bool, tol: &Tolerances<T>) -> Result<HolderQuotient> {
    if n < 1 || n > MAX_WINDOW {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..={MAX_WINDOW}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
    }
    let sn = s_n(n);
    let grid: Vec<T> = [-1.0, 0.0, 1.0, 2.0].iter().map(|&k| T::lit(k * sn)).collect();
    let tracked = if use_prefactor {
        track_on_grid(&CurveLemmaFamily::window(n), grid, Order::First, tol)?
    } else {
        if n > MAX_UNSCALED_WINDOW {
            return Err(Error::Underflow { n });
        }
        if T::lit(scale_n(n)) == T::zero() {
            return Err(Error::Underflow { n });
        }
        track_on_grid(&UnscaledWindow { n }, grid, Order::First, tol)?
    };
    // Branches are sorted at s = -s_n; the upper one is index 1.
    let d0 = tracked.derivs[1][1].as_f64();
    let d1 = tracked.derivs[2][1].as_f64();
    let denom = (alpha * ((n as f64) - (n as f64).powi(2))).exp2();
    let numerical = (d1 - d0) / denom;
    let analytic = (window_slope(n, sn) - window_slope(n, 0.0)) / denom;
    let closed_form = holder_closed_form(n, alpha);
    Ok(HolderQuotient {
        n,
        alpha,
        closed_form,
        numerical,
        analytic,
        relative_difference: ((numerical - closed_form) / closed_form).abs(),
    })
}

/// Angle between the spans of two unit vectors.
fn subspace_angle<T: Real>(u: &[Cplx<T>], v: &[Cplx<T>]) -> T {
    let c = inner(u, v);
    let residual: Vec<_> = v.iter().zip(u).map(|(&vi, &ui)| vi - ui * c).collect();
    vec_norm(&residual).atan2(c.norm())
}

/// Angle between the eigenvectors of the positive eigenvalue at `t_n` and
/// at `t_n + s_n`.
pub fn eigenvector_jump<T: Real>(n: u32) -> Result<T> {
    let w = CurveLemmaFamily::window(n);
    let a = hermitian_eig(&HermitianFamily::<T>::eval(&w, T::zero())?)?;
    let b = hermitian_eig(&HermitianFamily::<T>::eval(&w, T::lit(s_n(n)))?)?;
    Ok(subspace_angle(&a.vector(1), &b.vector(1)))
}

/// Angle between the top eigenvectors of two matrices.
pub fn top_eigenvector_angle<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    let ea = hermitian_eig(a)?;
    let eb = hermitian_eig(b)?;
    let k = ea.dim() - 1;
    Ok(subspace_angle(&ea.vector(k), &eb.vector(k)))
}
