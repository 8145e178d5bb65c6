//! Output distribution of three photons in a Haar-random interferometer from
//! Ryser permanents, checked against the symbolic Fock-space oracle, then
//! sampled exactly.

use std::sync::Arc;

use photonic_chaos::fock::{
    enumerate_configurations, exact_sampler, fock_evolution_oracle, permanent_ryser, probability_table,
    FockConfiguration,
};
use photonic_chaos::linalg::haar_unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> photonic_chaos::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u = haar_unitary(6, &mut rng)?;
    let input = FockConfiguration::from_photon_modes(6, &[0, 1, 2])?;
    let space = Arc::new(enumerate_configurations(6, 3)?);

    let table = probability_table(&u, &input, &space, 1)?;
    let oracle = fock_evolution_oracle(&u, &input, &space, 1)?;
    let worst = table.probs().iter().zip(oracle.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("{} outputs, total {:.12}, max |ryser - oracle| = {worst:.2e}", space.len(), table.total());

    let top = table.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty");
    println!("most likely output {} with P = {:.4}", top.0, top.1);
    println!("Per(U[0..3, 0..3]) = {:.4}", permanent_ryser(&u.select(&[0, 1, 2], &[0, 1, 2]))?);

    for s in exact_sampler(&table, &mut rng, 5) {
        println!("sample {s}");
    }
    Ok(())
}
