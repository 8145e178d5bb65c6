//! Two-point form factor of a kicked-rotor ensemble against the GOE curve.

use photonic_chaos::floquet::{build_ensemble, ParameterPoint};
use photonic_chaos::spectral::{ensemble_spectra, heisenberg_time, sff_2n, sff_goe_analytic};

fn main() -> photonic_chaos::Result<()> {
    let modes = 60;
    let ensemble = build_ensemble(&ParameterPoint::ChaoticWeakDisorder.params(modes), 0, 40)?;
    let spectra = ensemble_spectra(&ensemble)?;
    let tau_h = heisenberg_time(&spectra)?;
    let series = sff_2n(&spectra, 1, 3 * modes as u64)?;
    let times: Vec<f64> = series.times.iter().map(|&m| m as f64).collect();
    let goe = sff_goe_analytic(&times, modes, tau_h)?;

    println!("tau_H = {tau_h:.1}");
    println!("{:>5} {:>10} {:>10}", "m", "R2", "GOE");
    for (k, (&m, v)) in series.times.iter().zip(&series.values).enumerate() {
        if m < 4 || m % 15 == 0 {
            println!("{m:>5} {v:>10.2} {:>10.2}", goe[k]);
        }
    }
    Ok(())
}
