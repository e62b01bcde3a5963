use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{re, Cplx, Real};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; fails unless
    /// `entries.len() == rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Cplx<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            data: entries,
        })
    }

    pub fn from_real_rows(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| re(rows[i][j]))
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { re(diag[i]) } else { re(T::zero()) })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Cplx<T>>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        Self::from_fn(r, c, |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Cplx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Cplx<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        self.scale_complex(re(s))
    }

    pub fn scale_complex(&self, s: Cplx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// `self - z I`.
    pub fn shifted(&self, z: Cplx<T>) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= z;
        }
        m
    }

    /// `self += s * other`, entrywise.
    pub fn axpy(&mut self, s: Cplx<T>, other: &Self) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> Cplx<T> {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// `max_{ij} |a_ij - conj(a_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut d = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Hermitian within `tol * max(1, ||A||_F)`.
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermitian_defect() <= tol * T::one().max(self.frobenius_norm())
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = self.clone();
        m.axpy(re(T::one()), &adj);
        m.scale(T::lit(0.5))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == T::zero())
    }

    /// True when every entry off the three central diagonals is exactly zero.
    pub fn is_tridiagonal(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| i.abs_diff(j) <= 1 || self[(i, j)] == re(T::zero()))
        })
    }

    pub fn matvec(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == re(T::zero()) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `V* A V` for a matrix `V` with orthonormal columns.
    pub fn compress(&self, basis: &Self) -> Result<Self> {
        basis.adjoint().matmul(&self.matmul(basis)?)
    }

    pub fn pow(&self, p: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..p {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    /// Converts the scalar type entrywise.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Cplx<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        out.axpy(re(T::one()), rhs);
        out
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        out.axpy(re(-T::one()), rhs);
        out
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("shape mismatch")
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `<u, v> = sum conj(u_i) v_i`.
pub fn inner<T: Real>(u: &[Cplx<T>], v: &[Cplx<T>]) -> Cplx<T> {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
