//! Seeded random matrices for property checks and randomized experiments.

use num_complex::Complex;
use rand::Rng;

use crate::linalg::eigen::hermitian_eig;
use crate::linalg::matrix::Matrix;
use crate::scalar::{Cplx, Real};

/// Complex vector with independent entries uniform in `[-1, 1] + i[-1, 1]`.
pub fn random_vector<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<Cplx<T>> {
    (0..m)
        .map(|_| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
        .collect()
}

/// Hermitian matrix `(B + B*) / 2` with `B` having uniform complex entries.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Matrix<T> {
    let b = Matrix::from_fn(m, m, |_, _| {
        Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
    });
    b.hermitian_part()
}

/// Unitary matrix: eigenvectors of a random Hermitian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Matrix<T> {
    hermitian_eig(&random_hermitian::<T, R>(m, rng))
        .expect("random Hermitian matrices diagonalize")
        .eigenvectors
}

/// `Q diag(values) Q*`.
pub fn hermitian_with_spectrum<T: Real>(q: &Matrix<T>, values: &[T]) -> Matrix<T> {
    let d = Matrix::from_real_diag(values);
    (&(q * &d) * &q.adjoint()).hermitian_part()
}
