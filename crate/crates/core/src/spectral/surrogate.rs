//! Reference spectra with known spacing-ratio statistics.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

/// `m` i.i.d. uniform phases on `(−π, π]`, sorted: uncorrelated (Poissonian) levels.
pub fn poisson_levels<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..m).map(|_| PI - 2.0 * PI * rng.random::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// Sorted eigenvalues of `(G + Gᵀ)/2` with `G` real standard Gaussian: a GOE spectrum.
pub fn goe_levels<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let g = DMatrix::<f64>::from_fn(m, m, |_, _| rng.sample(StandardNormal));
    let h = (&g + g.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
