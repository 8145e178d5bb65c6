//! Dense complex linear algebra used by every other module.
//!
//! Matrices are stored row-major as [`Complex64`] entries. Products and powers
//! are computed directly; the eigendecomposition of unitary matrices is backed
//! by a complex Schur factorization.

mod eig;
mod haar;
mod io;
mod matrix;

pub use eig::{eig_unitary, EigenDecomposition};
pub use haar::haar_unitary;
pub use io::{decode_matrix, encode_matrix, read_matrix, write_matrix, MatrixSidecar};
pub use matrix::{matrix_power, multiply, ComplexMatrix};

pub use num_complex::Complex64;

/// Numerical tolerances shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-entry bound on `U†U − I` for anything treated as unitary.
    pub unitary: f64,
    /// Per-eigenpair residual bound, relative to the Frobenius norm.
    pub eig_residual: f64,
    /// Allowed distance of unitary eigenvalues from the unit circle.
    pub unit_circle: f64,
    /// Max-entry bound on `V†V − I` for the eigenvector matrix.
    pub eigvec_unitary: f64,
    /// Target accuracy of probability normalization.
    pub prob_norm: f64,
    /// Probability normalization error that is reported as a failure.
    pub prob_norm_fail: f64,
    /// Quasienergy gaps below this count as degenerate.
    pub degeneracy_gap: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    unitary: 1e-10,
    eig_residual: 1e-9,
    unit_circle: 1e-8,
    eigvec_unitary: 1e-8,
    prob_norm: 1e-8,
    prob_norm_fail: 1e-6,
    degeneracy_gap: 1e-10,
};
