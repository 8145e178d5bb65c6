//! Long-time averages of photon observables against diagonal-ensemble
//! predictions built from Floquet eigenstates.

use photonic_chaos::floquet::{build_floquet, sample_disorder, ParameterPoint};
use photonic_chaos::fock::FockConfiguration;
use photonic_chaos::otoc::{
    diagonal_ensemble_single, diagonal_ensemble_two, time_average_mean_photon, time_average_probability,
};
use photonic_chaos::spectral::quasienergies;

fn main() -> photonic_chaos::Result<()> {
    let modes = 10;
    let params = ParameterPoint::ChaoticWeakDisorder.params(modes);
    let f = build_floquet(&params, &sample_disorder(&params, 0, 0))?;
    let spec = quasienergies(&f)?;
    let horizon = 20_000;

    let single = FockConfiguration::single(modes, 4)?;
    for l in [0, 4, 9] {
        let avg = time_average_mean_photon(&f.matrix, &single, l, horizon)?;
        let pred = diagonal_ensemble_single(&spec, 4, l)?;
        println!("n_{l}: time average {:.5}, diagonal ensemble {:.5}", avg.value, pred.value);
    }

    let input = FockConfiguration::from_photon_modes(modes, &[4, 5])?;
    for (r, s) in [(0, 9), (2, 2), (4, 5)] {
        let output = FockConfiguration::from_photon_modes(modes, &[r, s])?;
        let avg = time_average_probability(&f.matrix, &input, &output, horizon)?;
        let pred = diagonal_ensemble_two(&spec, 4, 5, r, s)?;
        println!("P[{output}]: time average {:.5}, diagonal ensemble {:.5}", avg.value, pred.value);
    }
    Ok(())
}
