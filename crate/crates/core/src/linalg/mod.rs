//! Dense complex linear algebra.

pub mod eigen;
pub mod hessenberg;
pub mod matrix;
pub mod random;
pub mod solve;

pub use eigen::{hermitian_eig, hermitian_eig_with, jacobi_eig, numerical_rank, operator_norm, EigenDecomposition};
pub use matrix::{inner, vec_norm, Matrix};
pub use solve::{solve_shifted, solve_shifted_with, Lu};
pub use random::{hermitian_with_spectrum, random_hermitian, random_unitary, random_vector};
