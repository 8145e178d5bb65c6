use nalgebra::Schur;
use num_complex::Complex64;

use super::{multiply, ComplexMatrix, TOLERANCES};
use crate::error::{Error, Result};

/// Eigenvalues and orthonormal eigenvectors (as columns) of a unitary matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ^m) V†`.
    pub fn power(&self, m: i64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let lam: Vec<Complex64> = self.eigenvalues.iter().map(|l| l.powi(m as i32)).collect();
        let scaled = ComplexMatrix::from_fn(n, n, |i, a| v[(i, a)] * lam[a]);
        multiply(&scaled, &v.adjoint()).expect("square factors")
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.power(1)
    }

    /// Largest `‖U v_α − λ_α v_α‖₂` over all pairs.
    pub fn worst_residual(&self, u: &ComplexMatrix) -> f64 {
        let n = self.dim();
        let uv = multiply(u, &self.eigenvectors).expect("square factors");
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|i| (uv[(i, a)] - self.eigenvalues[a] * self.eigenvectors[(i, a)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Full eigendecomposition of a unitary matrix.
///
/// A unitary matrix is normal, so its complex Schur form is diagonal up to
/// rounding and the Schur vectors are an orthonormal eigenbasis, including
/// inside degenerate clusters.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !u.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let n = u.rows();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    let schur = Schur::try_new(u.to_nalgebra(), f64::EPSILON, 200 * n).ok_or(Error::Numerical {
        what: "Schur iteration did not converge",
        worst: f64::NAN,
    })?;
    let (q, t) = schur.unpack();
    let dec = EigenDecomposition {
        eigenvalues: (0..n).map(|i| t[(i, i)]).collect(),
        eigenvectors: ComplexMatrix::from_nalgebra(&q),
    };

    let worst = dec.worst_residual(u);
    if worst > TOLERANCES.eig_residual * u.frobenius_norm() {
        return Err(Error::Numerical {
            what: "eigenpair residual",
            worst,
        });
    }
    let off_circle = dec
        .eigenvalues
        .iter()
        .map(|l| (l.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if off_circle > TOLERANCES.unit_circle {
        return Err(Error::Numerical {
            what: "eigenvalue off the unit circle",
            worst: off_circle,
        });
    }
    Ok(dec)
}
