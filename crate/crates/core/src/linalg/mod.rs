//! Dense real matrices, the matrix exponential and a PSD Cholesky.

mod cholesky;
mod decomp;
mod expm;
mod matrix;

pub use cholesky::{cholesky_psd, CholeskyFactor, JitterPolicy, SYMMETRY_TOLERANCE};
pub use decomp::{determinant, symmetric_eigenvalues};
pub use expm::expm;
pub use matrix::{matmul, transpose, Matrix};
