//! Two photons spreading through a twelve-mode kicked-rotor circuit.

use std::sync::Arc;

use photonic_chaos::floquet::{build_floquet, sample_disorder, ParameterPoint};
use photonic_chaos::fock::{enumerate_configurations, mean_photon_profile, photon_dynamics, FockConfiguration};

fn main() -> photonic_chaos::Result<()> {
    let params = ParameterPoint::ChaoticWeakDisorder.params(12);
    let f = build_floquet(&params, &sample_disorder(&params, 0, 0))?;
    let input = FockConfiguration::from_photon_modes(12, &[5, 6])?;
    let space = Arc::new(enumerate_configurations(12, 2)?);

    for table in photon_dynamics(&f.matrix, &input, &space, 12)? {
        let profile: Vec<String> = mean_photon_profile(&table).iter().map(|n| format!("{n:.2}")).collect();
        println!("m={:>2}  {}", table.time(), profile.join(" "));
    }
    Ok(())
}
