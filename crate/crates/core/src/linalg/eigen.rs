//! Hermitian eigendecomposition.
//!
//! The general path is cyclic complex Jacobi. Real symmetric tridiagonal
//! input above [`TRIDIAGONAL_CUTOFF`] goes through implicit QL instead,
//! which is what keeps finite-difference Schrödinger tracking fast.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::matrix::Matrix;
use crate::scalar::{re, Cplx, Real};
use crate::tolerances::Tolerances;

const MAX_SWEEPS: usize = 60;

/// Dimension above which real tridiagonal input skips Jacobi.
pub const TRIDIAGONAL_CUTOFF: usize = 16;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Cplx<T>> {
        self.eigenvectors.column(k)
    }

    /// `V diag(lambda) V*`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let v = &self.eigenvectors;
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }

    /// `||A V - V diag(lambda)||_F`.
    pub fn residual(&self, a: &Matrix<T>) -> T {
        let av = a * &self.eigenvectors;
        let n = self.dim();
        let mut r = T::zero();
        for i in 0..n {
            for k in 0..n {
                r += (av[(i, k)] - self.eigenvectors[(i, k)] * self.eigenvalues[k]).norm_sqr();
            }
        }
        r.sqrt()
    }

    /// `||V* V - I||_F`.
    pub fn orthogonality_defect(&self) -> T {
        let g = &self.eigenvectors.adjoint() * &self.eigenvectors;
        (&g - &Matrix::identity(self.dim())).frobenius_norm()
    }
}

fn check_hermitian<T: Real>(a: &Matrix<T>, tol: T) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_hermitian(tol) {
        return Err(Error::NotHermitian {
            defect: a.hermitian_defect().as_f64(),
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix with default tolerances.
pub fn hermitian_eig<T: Real>(a: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    hermitian_eig_with(a, &Tolerances::default())
}

pub fn hermitian_eig_with<T: Real>(a: &Matrix<T>, tol: &Tolerances<T>) -> Result<EigenDecomposition<T>> {
    check_hermitian(a, tol.hermitian)?;
    if a.rows() > TRIDIAGONAL_CUTOFF && a.is_real() && a.is_tridiagonal() {
        tridiagonal_ql(a)
    } else {
        jacobi(a)
    }
}

/// Cyclic Jacobi regardless of structure.
pub fn jacobi_eig<T: Real>(a: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    check_hermitian(a, Tolerances::default().hermitian)?;
    jacobi(a)
}

fn off_norm_sqr<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi<T: Real>(input: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    let n = input.rows();
    let mut a = input.hermitian_part();
    for i in 0..n {
        a[(i, i)] = re(a[(i, i)].re);
    }
    let mut v = Matrix::identity(n);
    let total = a.frobenius_norm();
    let target = (T::epsilon() * total).powi(2);

    let mut sweeps = 0;
    while off_norm_sqr(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "Jacobi eigensolver",
                iterations: MAX_SWEEPS,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let eigenvalues: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(finish(eigenvalues, v))
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, e^{-i phi}) R(theta)`
/// acting on rows/columns `p, q`.
fn rotate<T: Real>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible relative to both diagonal entries: drop it.
    if app.abs() + g * T::lit(1e3) == app.abs() && aqq.abs() + g * T::lit(1e3) == aqq.abs() {
        a[(p, q)] = re(T::zero());
        a[(q, p)] = re(T::zero());
        return;
    }
    let phase = apq / g;
    let theta = (aqq - app) / (g + g);
    let t = if theta.abs() > T::lit(1e150) {
        T::one() / (theta + theta)
    } else {
        let s = if theta < T::zero() { -T::one() } else { T::one() };
        s / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let e = phase.conj();
    let gpp = re(c);
    let gpq = re(s);
    let gqp = e * (-s);
    let gqq = e * c;

    let n = a.rows();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A <- G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = re(T::zero());
    a[(q, p)] = re(T::zero());
    a[(p, p)] = re(app - t * g);
    a[(q, q)] = re(aqq + t * g);
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix.
fn tridiagonal_ql<T: Real>(a: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    let n = a.rows();
    let mut d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e: Vec<T> = (0..n)
        .map(|i| if i + 1 < n { a[(i + 1, i)].re } else { T::zero() })
        .collect();
    // Real eigenvector matrix, row-major.
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }

    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let budget = 30 * n.max(1);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > budget {
                    return Err(Error::NoConvergence {
                        what: "tridiagonal QL",
                        iterations: budget,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (e[l] + e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zh = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * zh;
                        z[k * n + i] = c * z[k * n + i] - s * zh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    let v = Matrix::from_fn(n, n, |i, j| re(z[i * n + j]));
    Ok(finish(d, v))
}

/// Sorts ascending (ties broken by the phase of each eigenvector's first
/// significant component) and rotates every eigenvector so that component
/// is real and positive.
fn finish<T: Real>(eigenvalues: Vec<T>, v: Matrix<T>) -> EigenDecomposition<T> {
    let n = eigenvalues.len();
    let threshold = T::epsilon().sqrt();
    let lead: Vec<Option<usize>> = (0..n)
        .map(|k| (0..n).find(|&i| v[(i, k)].norm() > threshold))
        .collect();
    let phase = |k: usize| lead[k].map_or(T::zero(), |i| v[(i, k)].arg());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eigenvalues[x]
            .partial_cmp(&eigenvalues[y])
            .unwrap_or(Ordering::Equal)
            .then_with(|| phase(x).partial_cmp(&phase(y)).unwrap_or(Ordering::Equal))
    });

    let sorted: Vec<T> = order.iter().map(|&k| eigenvalues[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &k) in order.iter().enumerate() {
        let rot = lead[k].map_or(Complex::new(T::one(), T::zero()), |i| {
            let z = v[(i, k)];
            z.conj() / z.norm()
        });
        for i in 0..n {
            vectors[(i, dst)] = v[(i, k)] * rot;
        }
    }
    EigenDecomposition {
        eigenvalues: sorted,
        eigenvectors: vectors,
    }
}

/// Number of singular values above `tol`. Hermitian input uses
/// `|eigenvalues|` directly.
pub fn numerical_rank<T: Real>(a: &Matrix<T>, tol: T) -> Result<usize> {
    Ok(singular_values(a)?.into_iter().filter(|&s| s > tol).count())
}

/// Largest singular value.
pub fn operator_norm<T: Real>(a: &Matrix<T>) -> Result<T> {
    Ok(singular_values(a)?
        .into_iter()
        .fold(T::zero(), |m, s| m.max(s)))
}

fn singular_values<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Vec::new());
    }
    if a.is_square() && a.hermitian_defect() <= T::epsilon() * T::lit(16.0) * a.max_abs() {
        return Ok(hermitian_eig(a)?
            .eigenvalues
            .into_iter()
            .map(|l| l.abs())
            .collect());
    }
    let gram = (&a.adjoint() * a).hermitian_part();
    let values = if gram.rows() > TRIDIAGONAL_CUTOFF {
        tridiagonalized_eigenvalues(&gram)?
    } else {
        jacobi(&gram)?.eigenvalues
    };
    Ok(values
        .into_iter()
        .map(|l| l.max(T::zero()).sqrt())
        .collect())
}

/// Eigenvalues only: Householder reduction to a Hermitian tridiagonal
/// matrix, whose off-diagonal phases are then dropped (a diagonal unitary
/// similarity) before implicit QL.
fn tridiagonalized_eigenvalues<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    let n = a.rows();
    let mut m = a.clone();
    let mut off = vec![T::zero(); n.saturating_sub(1)];
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Cplx<T>> = (k + 1..n).map(|i| m[(i, k)]).collect();
        let alpha = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        off[k] = alpha;
        if alpha == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > T::zero() { x0 / re(x0.norm()) } else { re(T::one()) };
        v[0] = v[0] + phase * re(alpha);
        let vv = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        let tau = T::lit(2.0) / vv;
        let len = v.len();
        // p = tau * A22 v
        let p: Vec<Cplx<T>> = (0..len)
            .map(|i| {
                let row: Cplx<T> = (0..len).map(|j| m[(k + 1 + i, k + 1 + j)] * v[j]).sum();
                row * re(tau)
            })
            .collect();
        let vp: Cplx<T> = v.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
        let half = vp.re * tau / T::lit(2.0);
        let w: Vec<Cplx<T>> = p.iter().zip(&v).map(|(&pi, &vi)| pi - vi * re(half)).collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                m[(k + 1 + i, k + 1 + j)] = m[(k + 1 + i, k + 1 + j)] - upd;
            }
        }
    }
    if n >= 2 {
        off[n - 2] = m[(n - 1, n - 2)].norm();
    }
    let mut t = Matrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = re(m[(i, i)].re);
        if i + 1 < n {
            t[(i + 1, i)] = re(off[i]);
            t[(i, i + 1)] = re(off[i]);
        }
    }
    Ok(tridiagonal_ql(&t)?.eigenvalues)
}
