//! Shapiro–Wilk test of 3×3 scattering submatrix entries from a kicked-rotor
//! ensemble and from Haar-random unitaries.

use photonic_chaos::floquet::{build_ensemble, ParameterPoint};
use photonic_chaos::gaussianity::{collect_from_ensemble, collect_submatrix_elements, shapiro_wilk, Part};
use photonic_chaos::linalg::haar_unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> photonic_chaos::Result<()> {
    let (modes, members, m) = (60, 60, 60);
    let idx = [0, 1, 2];
    let ensemble = build_ensemble(&ParameterPoint::ChaoticWeakDisorder.params(modes), 0, members)?;
    let kicked = collect_from_ensemble(&ensemble, &idx, &idx, m, Part::Pooled)?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let haar = (0..members).map(|_| haar_unitary(modes, &mut rng)).collect::<Result<Vec<_>, _>>()?;
    let haar = collect_submatrix_elements(&haar, &idx, &idx, 0, Part::Pooled)?;

    for (label, set) in [("kicked", &kicked), ("haar", &haar)] {
        let rep = shapiro_wilk(set, 0.05, 0)?;
        println!(
            "{label:>6}: n={} var*M={:.3} W={:.4} p={:.3} normal={}",
            rep.n,
            set.variance() * modes as f64,
            rep.w_statistic,
            rep.p_value,
            rep.normal
        );
    }
    Ok(())
}
