use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Samples an `m × m` unitary from the Haar measure (CUE).
///
/// A Ginibre matrix with i.i.d. standard complex Gaussian entries is
/// QR-factorized and each column of `Q` is multiplied by the phase of the
/// matching diagonal entry of `R`, which removes the bias of the QR phase
/// convention.
pub fn haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::invalid("Haar unitary needs m >= 1"));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = nalgebra::DMatrix::<Complex64>::from_fn(m, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    Ok(ComplexMatrix::from_nalgebra(&q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn output_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in [1, 2, 5, 32] {
            let u = haar_unitary(m, &mut rng).unwrap();
            assert!(u.unitarity_error() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn one_by_one_is_a_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn second_moment_matches_haar() {
        // E|U_11|^2 = 1/m
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| haar_unitary(2, &mut rng).unwrap()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn one_by_one_phase_is_uniform() {
        // the phase-of-diagonal correction makes arg(U_11) uniform on the circle;
        // the first two circular moments then vanish
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 20_000;
        let mut m1 = Complex64::new(0.0, 0.0);
        let mut m2 = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let z = haar_unitary(1, &mut rng).unwrap()[(0, 0)];
            m1 += z;
            m2 += z * z;
        }
        assert!(m1.norm() / (n as f64) < 0.03);
        assert!(m2.norm() / (n as f64) < 0.03);
    }

    #[test]
    fn zero_size_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(haar_unitary(0, &mut rng).is_err());
    }
}
