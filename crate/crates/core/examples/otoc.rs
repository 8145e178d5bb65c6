//! Out-of-time-order correlators are scattering probabilities: the fourth-order
//! correlator matches the two-photon permanent at every time.

use photonic_chaos::floquet::{build_floquet, sample_disorder, ParameterPoint};
use photonic_chaos::fock::FockConfiguration;
use photonic_chaos::otoc::{otoc_2, otoc_2n, otoc_4};

fn main() -> photonic_chaos::Result<()> {
    let params = ParameterPoint::ChaoticStrongKick.params(16);
    let f = build_floquet(&params, &sample_disorder(&params, 0, 0))?.matrix;
    let (i, j, r, s) = (7, 8, 3, 12);
    let input = FockConfiguration::from_photon_modes(16, &[i, j])?;
    let output = FockConfiguration::from_photon_modes(16, &[r, s])?;

    println!("{:>3} {:>10} {:>10} {:>10}", "m", "C2", "C4", "Per");
    for m in 0..=10 {
        let c2 = otoc_2(&f, i, r, m)?.value;
        let c4 = otoc_4(&f, i, j, r, s, m)?.value;
        let per = otoc_2n(&f, &input, &output, m)?.value;
        println!("{m:>3} {c2:>10.5} {c4:>10.5} {per:>10.5}");
    }
    Ok(())
}
