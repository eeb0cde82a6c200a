//! Dense complex matrix arithmetic and a Hermitian eigensolver.
//!
//! Matrices are square, row-major, and immutable in practice: every
//! operation returns a fresh matrix, so values can be shared read-only
//! across workers. The matmul may run on rayon internally; the per-element
//! summation order is fixed, so results do not depend on the worker count.

mod eigen;
mod haar;
mod matrix;

pub use eigen::{hermitian_eigendecompose, SpectralDecomposition};
pub use haar::sample_haar_unitary;
pub use matrix::{kron, ComplexMatrix};

use thiserror::Error;

/// Relative threshold for the Hermiticity check: max |H_ij - conj(H_ji)|
/// against `maxnorm(H)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Threshold for the unitarity check: maxnorm(M†M - I).
pub const UNITARITY_TOL: f64 = 1e-10;

/// Default relative Frobenius tolerance for eigendecomposition residuals.
pub const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian: max |H_ij - conj(H_ji)| = {violation:.3e} exceeds {threshold:.3e}")]
    NotHermitian { violation: f64, threshold: f64 },
    #[error("eigensolver failed to converge: worst off-diagonal residual {worst_offdiag:.3e}")]
    Convergence { worst_offdiag: f64 },
    #[error("invalid tolerance {0}; must be positive")]
    InvalidTolerance(f64),
}
