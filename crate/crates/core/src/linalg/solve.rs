use crate::error::{Error, Result};
use crate::linalg::matrix::Matrix;
use crate::scalar::{Cplx, Real};
use crate::tolerances::Tolerances;

/// LU factorization with partial pivoting of a square complex matrix.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Factors `a`; fails with [`Error::ContourTouchesSpectrum`] (carrying
    /// `shift` for diagnostics) when a pivot falls below
    /// `guard * max(1, max|a_ij|)`.
    pub fn factor(a: &Matrix<T>, guard: T, shift: Cplx<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = guard * T::one().max(a.max_abs());
        for k in 0..n {
            let (piv, mag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag <= threshold {
                return Err(Error::ContourTouchesSpectrum {
                    re: shift.re.as_f64(),
                    im: shift.im.as_f64(),
                    pivot: mag.as_f64(),
                });
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.rows(),
            });
        }
        let mut x = Matrix::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)]);
        for c in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in (i + 1)..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }
}

/// `(A - z I)^{-1} B` by pivoted LU.
pub fn solve_shifted<T: Real>(a: &Matrix<T>, z: Cplx<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    solve_shifted_with(a, z, b, &Tolerances::default())
}

pub fn solve_shifted_with<T: Real>(
    a: &Matrix<T>,
    z: Cplx<T>,
    b: &Matrix<T>,
    tol: &Tolerances<T>,
) -> Result<Matrix<T>> {
    Lu::factor(&a.shifted(z), tol.resolvent_guard, z)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;
    use num_complex::Complex;

    #[test]
    fn diagonal_inversion() {
        let a = Matrix::<f64>::from_real_diag(&[1.0, 2.0]);
        let x = solve_shifted(&a, re(0.0), &Matrix::identity(2)).unwrap();
        assert!((&x - &Matrix::from_real_diag(&[1.0, 0.5])).frobenius_norm() < 1e-15);
    }

    #[test]
    fn shifted_reciprocals() {
        let a = Matrix::<f64>::from_real_diag(&[1.0, 2.0, 5.0]);
        let x = solve_shifted(&a, Complex::new(1.5, 0.0), &Matrix::identity(3)).unwrap();
        let expected = Matrix::from_real_diag(&[-2.0, 2.0, 1.0 / 3.5]);
        assert!((&x - &expected).frobenius_norm() < 1e-15);
    }

    #[test]
    fn shift_on_spectrum_is_reported() {
        let a = Matrix::<f64>::from_real_diag(&[1.0, 2.0]);
        let err = solve_shifted(&a, re(1.0), &Matrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::ContourTouchesSpectrum { .. }));
        assert!(err.to_string().contains("contour touches spectrum"));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = Matrix::from_real_rows(&[&[1.0], &[2.0]]);
        let x = solve_shifted(&a, re(0.0), &b).unwrap();
        assert!((x[(0, 0)].re - 2.0).abs() < 1e-15 && (x[(1, 0)].re - 1.0).abs() < 1e-15);
    }
}
