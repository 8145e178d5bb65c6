//! Mean spacing ratio at the named parameter points, next to the Poisson and
//! GOE references and surrogate spectra drawn from both.

use photonic_chaos::floquet::{build_ensemble, ParameterPoint};
use photonic_chaos::spectral::surrogate::{goe_levels, poisson_levels};
use photonic_chaos::spectral::{
    ensemble_spectra, heisenberg_time, mean_ratio, mean_ratio_of_levels, MEAN_R_GOE, MEAN_R_POISSON,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> photonic_chaos::Result<()> {
    let (modes, members, seed) = (120, 20, 0);
    println!("Poisson {MEAN_R_POISSON:.4}  GOE {MEAN_R_GOE:.4}");
    for point in ParameterPoint::ALL {
        let ensemble = build_ensemble(&point.params(modes), seed, members)?;
        let spectra = ensemble_spectra(&ensemble)?;
        println!(
            "{point:?}: <r> = {:.4}, tau_H = {:.1}",
            mean_ratio(&spectra)?,
            heisenberg_time(&spectra)?
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poisson: Vec<Vec<f64>> = (0..members).map(|_| poisson_levels(modes, &mut rng)).collect();
    let goe: Vec<Vec<f64>> = (0..members).map(|_| goe_levels(modes, &mut rng)).collect();
    let refs = |v: &[Vec<f64>]| mean_ratio_of_levels(&v.iter().map(Vec::as_slice).collect::<Vec<_>>());
    println!("surrogates: Poisson {:.4}, GOE {:.4}", refs(&poisson)?, refs(&goe)?);
    Ok(())
}
