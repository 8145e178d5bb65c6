//! The standard map reached in the classical limit: a regular orbit below the
//! chaos threshold and momentum diffusion above it.

use photonic_chaos::classical::{kbar, momentum_variance, orbit, RotorState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() {
    let trap = PI / 4.0;
    let unit = 1.0 / (16.0 * trap);
    for theta_units in [0.5, 7.4, 18.0] {
        let k = kbar(theta_units * unit, trap);
        let trace = orbit(RotorState::new(0.0, 1.0), k, 1000);
        let spread = trace.states.iter().map(|s| s.x.abs()).fold(0.0, f64::max);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let var = momentum_variance(k, 0.0, 500, 200, &mut rng);
        println!("K = {k:>5.2}: max |X| on one orbit {spread:>8.2}, Var X after 200 kicks {:>10.1}", var[200]);
    }
}
