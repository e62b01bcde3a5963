//! Parameterized Hermitian families `t -> A(t)`.
//!
//! A family reports matrices at *unit scale*: the true operator is
//! `prefactor * eval(t)` when [`HermitianFamily::scale_prefactor`] is set.
//! Derivatives follow the same convention. Keeping the prefactor apart lets
//! families such as `2^{-n^2} A_n` be diagonalized without underflow and
//! their eigenvalues rescaled exactly afterwards.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{Expression, Var};
use crate::linalg::{hermitian_eig, operator_norm, random::random_vector, vec_norm, Matrix};
use crate::scalar::{re, Cplx, Real};
use crate::tolerances::Tolerances;

pub trait HermitianFamily<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    /// `A(t)` at unit scale.
    fn eval(&self, t: T) -> Result<Matrix<T>>;

    /// Analytic `A'(t)` at unit scale, when known.
    fn deriv(&self, _t: T) -> Option<Result<Matrix<T>>> {
        None
    }

    /// Analytic `A''(t)` at unit scale, when known.
    fn deriv2(&self, _t: T) -> Option<Result<Matrix<T>>> {
        None
    }

    fn scale_prefactor(&self) -> Option<T> {
        None
    }

    fn name(&self) -> &str;

    /// Parameter record for reports.
    fn params(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

impl<T: Real, F: HermitianFamily<T> + ?Sized> HermitianFamily<T> for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, t: T) -> Result<Matrix<T>> {
        (**self).eval(t)
    }
    fn deriv(&self, t: T) -> Option<Result<Matrix<T>>> {
        (**self).deriv(t)
    }
    fn deriv2(&self, t: T) -> Option<Result<Matrix<T>>> {
        (**self).deriv2(t)
    }
    fn scale_prefactor(&self) -> Option<T> {
        (**self).scale_prefactor()
    }
    fn name(&self) -> &str {
        (**self).name()
    }
    fn params(&self) -> Vec<(String, String)> {
        (**self).params()
    }
}

impl<T: Real, F: HermitianFamily<T> + ?Sized> HermitianFamily<T> for Box<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, t: T) -> Result<Matrix<T>> {
        (**self).eval(t)
    }
    fn deriv(&self, t: T) -> Option<Result<Matrix<T>>> {
        (**self).deriv(t)
    }
    fn deriv2(&self, t: T) -> Option<Result<Matrix<T>>> {
        (**self).deriv2(t)
    }
    fn scale_prefactor(&self) -> Option<T> {
        (**self).scale_prefactor()
    }
    fn name(&self) -> &str {
        (**self).name()
    }
    fn params(&self) -> Vec<(String, String)> {
        (**self).params()
    }
}

/// Prefactor, or one.
pub fn prefactor<T: Real>(family: &impl HermitianFamily<T>) -> T {
    family.scale_prefactor().unwrap_or_else(T::one)
}

/// `A(t)` at true scale.
pub fn eval_scaled<T: Real>(family: &impl HermitianFamily<T>, t: T) -> Result<Matrix<T>> {
    let a = family.eval(t)?;
    Ok(match family.scale_prefactor() {
        Some(p) => a.scale(p),
        None => a,
    })
}

/// `A'(t)` at unit scale: analytic when available, otherwise a central
/// difference with step `h_fd * max(1, |t|)`.
pub fn derivative<T: Real>(family: &impl HermitianFamily<T>, t: T, tol: &Tolerances<T>) -> Result<Matrix<T>> {
    if let Some(d) = family.deriv(t) {
        return d;
    }
    central_difference(family, t, tol.step(t))
}

pub fn central_difference<T: Real>(family: &impl HermitianFamily<T>, t: T, h: T) -> Result<Matrix<T>> {
    let plus = family.eval(t + h)?;
    let minus = family.eval(t - h)?;
    Ok((&plus - &minus).scale(T::one() / (h + h)))
}

/// `A''(t)` at unit scale: analytic when available, otherwise a central
/// second difference with step `h_fd2 * max(1, |t|)`.
pub fn second_derivative<T: Real>(family: &impl HermitianFamily<T>, t: T, tol: &Tolerances<T>) -> Result<Matrix<T>> {
    if let Some(d) = family.deriv2(t) {
        return d;
    }
    let h = tol.step2(t);
    let plus = family.eval(t + h)?;
    let mid = family.eval(t)?;
    let minus = family.eval(t - h)?;
    let mut acc = &plus + &minus;
    acc.axpy(re(-T::lit(2.0)), &mid);
    Ok(acc.scale(T::one() / (h * h)))
}

/// `t -> A'(t)` as a closure.
pub fn derivative_family<'a, T: Real>(
    family: &'a impl HermitianFamily<T>,
    tol: Tolerances<T>,
) -> impl Fn(T) -> Result<Matrix<T>> + 'a {
    move |t| derivative(family, t, &tol)
}

/// `sqrt(||u||^2 + ||A(t) u||^2)` with `A` at true scale.
pub fn graph_norm<T: Real>(family: &impl HermitianFamily<T>, t: T, u: &[Cplx<T>]) -> Result<T> {
    if u.len() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: u.len(),
        });
    }
    let a = eval_scaled(family, t)?;
    Ok(graph_norm_with(&a, u))
}

fn graph_norm_with<T: Real>(a: &Matrix<T>, u: &[Cplx<T>]) -> T {
    let n = vec_norm(u);
    let au = vec_norm(&a.matvec(u));
    n.hypot(au)
}

/// Empirical equivalence constant: `max ||u||_t / ||u||_s` over the
/// eigenvectors of `A(s)` and `A(t)` plus `samples` seeded random vectors.
pub fn graph_norm_equivalence_ratio<T: Real>(
    family: &impl HermitianFamily<T>,
    s: T,
    t: T,
    samples: usize,
    seed: u64,
) -> Result<T> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let a_s = eval_scaled(family, s)?;
    let a_t = eval_scaled(family, t)?;
    let m = family.dim();
    let mut probes: Vec<Vec<Cplx<T>>> = Vec::with_capacity(2 * m + samples);
    for a in [&a_s, &a_t] {
        let e = hermitian_eig(a)?;
        probes.extend((0..m).map(|k| e.vector(k)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    probes.extend((0..samples).map(|_| random_vector::<T, _>(m, &mut rng)));

    let ratio = |from: &Matrix<T>, to: &Matrix<T>| {
        probes
            .iter()
            .filter_map(|u| {
                let d = graph_norm_with(from, u);
                (d > T::zero()).then(|| graph_norm_with(to, u) / d)
            })
            .fold(T::zero(), |acc, r| acc.max(r))
    };
    let forward = ratio(&a_s, &a_t);
    let backward = ratio(&a_t, &a_s);
    if !(forward.is_finite() && backward.is_finite() && forward > T::zero() && backward > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "graph norms not equivalent between s = {s} and t = {t}"
        )));
    }
    Ok(forward)
}

/// `||D||` as an operator from `(V, ||.||_A)` to `H`, where `||u||_A` is the
/// graph norm of `a`: `||D (I + A^2)^{-1/2}||`.
pub fn graph_operator_norm<T: Real>(d: &Matrix<T>, a: &Matrix<T>) -> Result<T> {
    let e = hermitian_eig(a)?;
    let n = e.dim();
    let v = &e.eigenvectors;
    let weights: Vec<T> = e
        .eigenvalues
        .iter()
        .map(|&l| T::one() / (T::one() + l * l).sqrt())
        .collect();
    let inv_sqrt = Matrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * weights[k]).sum()
    });
    operator_norm(&(d * &inv_sqrt))
}

type MatrixFn<T> = Arc<dyn Fn(T) -> Result<Matrix<T>> + Send + Sync>;

/// Family defined by closures.
#[derive(Clone)]
pub struct FnFamily<T> {
    name: String,
    dim: usize,
    eval: MatrixFn<T>,
    deriv: Option<MatrixFn<T>>,
    deriv2: Option<MatrixFn<T>>,
    prefactor: Option<T>,
}

impl<T: Real> FnFamily<T> {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        eval: impl Fn(T) -> Matrix<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            eval: Arc::new(move |t| Ok(eval(t))),
            deriv: None,
            deriv2: None,
            prefactor: None,
        }
    }

    pub fn with_deriv(mut self, d: impl Fn(T) -> Matrix<T> + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(move |t| Ok(d(t))));
        self
    }

    pub fn with_deriv2(mut self, d: impl Fn(T) -> Matrix<T> + Send + Sync + 'static) -> Self {
        self.deriv2 = Some(Arc::new(move |t| Ok(d(t))));
        self
    }

    pub fn with_prefactor(mut self, p: T) -> Self {
        self.prefactor = Some(p);
        self
    }

    /// Drops analytic derivatives so finite differences are used.
    pub fn without_derivatives(mut self) -> Self {
        self.deriv = None;
        self.deriv2 = None;
        self
    }
}

impl<T: Real> HermitianFamily<T> for FnFamily<T> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, t: T) -> Result<Matrix<T>> {
        (self.eval)(t)
    }
    fn deriv(&self, t: T) -> Option<Result<Matrix<T>>> {
        self.deriv.as_ref().map(|d| d(t))
    }
    fn deriv2(&self, t: T) -> Option<Result<Matrix<T>>> {
        self.deriv2.as_ref().map(|d| d(t))
    }
    fn scale_prefactor(&self) -> Option<T> {
        self.prefactor
    }
    fn name(&self) -> &str {
        &self.name
    }
}

/// User-supplied matrix of expressions in `t`.
///
/// `entries` is either the full `m x m` array in row-major order or just
/// the upper triangle (row-major, `m(m+1)/2` values). A lower-triangle
/// entry written as `.` is filled by conjugating its mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprMatrixSpec {
    pub dim: usize,
    pub entries: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ExprFamily {
    dim: usize,
    /// `cells[i][j]` is `None` where the entry mirrors `(j, i)`.
    cells: Vec<Vec<Option<Expression>>>,
}

const DIAGONAL_IMAG_TOL: f64 = 1e-12;

impl ExprFamily {
    pub fn new(spec: &ExprMatrixSpec) -> Result<Self> {
        let m = spec.dim;
        if m == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let full = m * m;
        let upper = m * (m + 1) / 2;
        let mut cells: Vec<Vec<Option<Expression>>> = vec![vec![None; m]; m];
        let parse = |s: &str| Expression::parse_with(s, &[Var::T]).map_err(Error::from);
        if spec.entries.len() == full {
            for i in 0..m {
                for j in 0..m {
                    let src = spec.entries[i * m + j].trim();
                    if i > j && src == "." {
                        continue;
                    }
                    cells[i][j] = Some(parse(src)?);
                }
            }
        } else if spec.entries.len() == upper {
            let mut it = spec.entries.iter();
            for (i, row) in cells.iter_mut().enumerate() {
                for cell in row.iter_mut().skip(i) {
                    *cell = Some(parse(it.next().expect("length checked").trim())?);
                }
            }
        } else {
            return Err(Error::DimensionMismatch {
                expected: full,
                found: spec.entries.len(),
            });
        }
        Ok(Self { dim: m, cells })
    }

    fn eval_f64(&self, t: f64) -> Result<Matrix<f64>> {
        let m = self.dim;
        let mut a = Matrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                if let Some(e) = &self.cells[i][j] {
                    a[(i, j)] = e.eval(t)?;
                }
            }
        }
        for i in 0..m {
            let d = a[(i, i)];
            if d.im.abs() > DIAGONAL_IMAG_TOL * (1.0 + d.re.abs()) {
                return Err(Error::NotHermitian { defect: d.im.abs() });
            }
            a[(i, i)] = Complex64::new(d.re, 0.0);
            for j in 0..i {
                if self.cells[i][j].is_none() {
                    a[(i, j)] = a[(j, i)].conj();
                }
            }
        }
        if !a.is_hermitian(Tolerances::<f64>::default().hermitian) {
            return Err(Error::NotHermitian {
                defect: a.hermitian_defect(),
            });
        }
        Ok(a)
    }
}

impl<T: Real> HermitianFamily<T> for ExprFamily {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, t: T) -> Result<Matrix<T>> {
        Ok(self.eval_f64(t.as_f64())?.cast())
    }
    fn name(&self) -> &str {
        "expr"
    }
    fn params(&self) -> Vec<(String, String)> {
        vec![("dim".into(), self.dim.to_string())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn swap_family() -> FnFamily<f64> {
        FnFamily::new("swap", 2, |t: f64| Matrix::from_real_rows(&[&[0.0, t], &[t, 0.0]]))
    }

    fn smooth_family() -> FnFamily<f64> {
        FnFamily::new("smooth", 3, |t: f64| {
            Matrix::from_fn(3, 3, |i, j| {
                let (i, j) = (i as f64, j as f64);
                if i == j {
                    re((t * (i + 1.0)).sin() + i)
                } else {
                    Complex64::new((t * (i + j)).cos(), (t * (i - j)).sin() * 0.3)
                }
            })
        })
    }

    #[test]
    fn constant_family_has_zero_derivative() {
        let f = FnFamily::new("const", 2, |_t: f64| Matrix::from_real_diag(&[1.0, 2.0]));
        let d = derivative(&f, 0.3, &Tolerances::default()).unwrap();
        assert_eq!(d.frobenius_norm(), 0.0);
    }

    #[test]
    fn swap_family_derivative() {
        let d = derivative_family(&swap_family(), Tolerances::default())(0.7).unwrap();
        let want = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!((&d - &want).frobenius_norm() < 1e-10);
    }

    #[test]
    fn graph_norm_examples() {
        let zero = FnFamily::new("zero", 2, |_t: f64| Matrix::zeros(2, 2));
        let u = vec![re(3.0), re(4.0)];
        assert_eq!(graph_norm(&zero, 0.0, &u).unwrap(), 5.0);
        let three = FnFamily::new("three", 1, |_t: f64| Matrix::from_real_diag(&[3.0]));
        assert!((graph_norm(&three, 0.0, &[re(1.0)]).unwrap() - 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(graph_norm(&three, 0.0, &[re(0.0)]).unwrap(), 0.0);
        assert!(graph_norm(&three, 0.0, &u).is_err());
    }

    #[test]
    fn graph_norm_respects_prefactor() {
        let f = FnFamily::new("scaled", 1, |_t: f64| Matrix::from_real_diag(&[1.0])).with_prefactor(3.0);
        assert!((graph_norm(&f, 0.0, &[re(1.0)]).unwrap() - 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn equivalence_ratio_examples() {
        let f = smooth_family();
        assert!((graph_norm_equivalence_ratio(&f, 0.4, 0.4, 8, 1).unwrap() - 1.0).abs() < 1e-12);
        let lin = FnFamily::new("lin", 1, |t: f64| Matrix::from_real_diag(&[t]));
        assert!(graph_norm_equivalence_ratio(&lin, 0.0, 1.0, 4, 1).unwrap() >= 2f64.sqrt() - 1e-15);
        let c = FnFamily::new("const", 2, |_t: f64| Matrix::from_real_diag(&[1.0, -2.0]));
        assert!((graph_norm_equivalence_ratio(&c, -1.0, 3.0, 4, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(graph_norm_equivalence_ratio(&c, 0.0, 1.0, 0, 1).is_err());
    }

    #[test]
    fn graph_operator_norm_bounds_plain_norm() {
        let a = Matrix::<f64>::from_real_diag(&[0.0, 2.0]);
        let d = Matrix::from_real_diag(&[1.0, 1.0]);
        // Largest at the zero eigenvalue: 1 / sqrt(1 + 0).
        assert!((graph_operator_norm(&d, &a).unwrap() - 1.0).abs() < 1e-14);
        let d2 = Matrix::from_real_diag(&[0.0, 5.0]);
        assert!((graph_operator_norm(&d2, &a).unwrap() - 5.0 / 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn expression_family_fills_lower_triangle() {
        let spec = ExprMatrixSpec {
            dim: 2,
            entries: vec!["1".into(), "t + i".into(), ".".into(), "-1".into()],
        };
        let f = ExprFamily::new(&spec).unwrap();
        let a: Matrix<f64> = f.eval(2.0).unwrap();
        assert_eq!(a[(1, 0)], Complex64::new(2.0, -1.0));
        let upper = ExprMatrixSpec {
            dim: 2,
            entries: vec!["1".into(), "t".into(), "-1".into()],
        };
        let g = ExprFamily::new(&upper).unwrap();
        let b: Matrix<f64> = g.eval(2.0).unwrap();
        assert_eq!(b[(1, 0)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn expression_family_rejects_imaginary_diagonal() {
        let spec = ExprMatrixSpec {
            dim: 2,
            entries: vec!["i".into(), "0".into(), "0".into()],
        };
        let f = ExprFamily::new(&spec).unwrap();
        assert!(matches!(
            HermitianFamily::<f64>::eval(&f, 0.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn expression_family_rejects_inconsistent_lower_entry() {
        let spec = ExprMatrixSpec {
            dim: 2,
            entries: vec!["0".into(), "t".into(), "2*t".into(), "0".into()],
        };
        let f = ExprFamily::new(&spec).unwrap();
        assert!(HermitianFamily::<f64>::eval(&f, 1.0).is_err());
        assert!(HermitianFamily::<f64>::eval(&f, 0.0).is_ok());
    }

    #[test]
    fn second_order_central_differences() {
        // Richardson: halving h divides the error by ~4.
        let f = smooth_family();
        let exact = |t: f64| {
            Matrix::from_fn(3, 3, |i, j| {
                let (i, j) = (i as f64, j as f64);
                if i == j {
                    re((i + 1.0) * (t * (i + 1.0)).cos())
                } else {
                    Complex64::new(-(i + j) * (t * (i + j)).sin(), 0.3 * (i - j) * (t * (i - j)).cos())
                }
            })
        };
        for &t in &[-1.3, 0.2, 0.9] {
            let e1 = (&central_difference(&f, t, 1e-2).unwrap() - &exact(t)).frobenius_norm();
            let e2 = (&central_difference(&f, t, 5e-3).unwrap() - &exact(t)).frobenius_norm();
            let ratio = e1 / e2;
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    proptest! {
        #[test]
        fn smooth_family_is_hermitian(t in -10.0f64..10.0) {
            let a = smooth_family().eval(t).unwrap();
            prop_assert!(a.is_hermitian(1e-10));
        }

        #[test]
        fn equivalence_ratios_multiply_to_at_least_one(s in -3.0f64..3.0, t in -3.0f64..3.0) {
            let f = smooth_family();
            let fwd = graph_norm_equivalence_ratio(&f, s, t, 4, 9).unwrap();
            let bwd = graph_norm_equivalence_ratio(&f, t, s, 4, 9).unwrap();
            prop_assert!(fwd * bwd >= 1.0 - 1e-12);
        }

        #[test]
        fn graph_norm_dominates_plain_norm(t in -3.0f64..3.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let u = vec![re(a), Complex64::new(b, a), re(b)];
            let g = graph_norm(&smooth_family(), t, &u).unwrap();
            prop_assert!(g >= vec_norm(&u));
        }
    }
}
