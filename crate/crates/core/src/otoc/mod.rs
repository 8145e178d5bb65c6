//! Out-of-time-order correlators of the photonic circuit and the long-time
//! averages that follow from the Floquet spectrum.
//!
//! For photons injected into modes `I` and detected in `F`, the `2N`-point
//! correlator equals the sampling probability `P_F`, so the functions here
//! give a second route to the same numbers as [`crate::fock`].

mod equilibration;

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

pub use equilibration::{
    diagonal_ensemble_single, diagonal_ensemble_two, mean_photon_two_particle, q_average,
    time_average_mean_photon, time_average_probabilities, time_average_probability, time_average_profile,
    write_equilibration_json, DiagonalEnsemblePrediction, EquilibrationRecord, TimeAverage,
    DEGENERACY_GAP,
};

use crate::error::{Error, Result};
use crate::fock::{amplitude, factorial_product, FockConfiguration};
use crate::linalg::{matrix_power, ComplexMatrix};
use crate::spectral::QuasienergySpectrum;

/// A correlator of order `2N` between two configurations at time `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OtocValue {
    pub order: usize,
    pub input: FockConfiguration,
    pub output: FockConfiguration,
    pub m: u64,
    pub value: f64,
}

fn check_mode(u: &ComplexMatrix, k: usize) -> Result<()> {
    if k >= u.rows() {
        return Err(Error::invalid(format!("mode {k} out of range for {} modes", u.rows())));
    }
    Ok(())
}

/// `𝒞^{(2)}_{ij}(m) = |U_ij(m)|²`.
pub fn otoc_2(f: &ComplexMatrix, i: usize, j: usize, m: u64) -> Result<OtocValue> {
    check_mode(f, i)?;
    check_mode(f, j)?;
    let u = matrix_power(f, m)?;
    let modes = f.rows();
    Ok(OtocValue {
        order: 2,
        input: FockConfiguration::single(modes, i)?,
        output: FockConfiguration::single(modes, j)?,
        m,
        value: u[(i, j)].norm_sqr(),
    })
}

/// `𝒞^{(4)}_{ijrs}(m) = |U_ir U_js + U_is U_jr|²`.
///
/// When two photons share an input or output mode the value is divided by the
/// occupation factorials, so it stays equal to the sampling probability.
pub fn otoc_4(f: &ComplexMatrix, i: usize, j: usize, r: usize, s: usize, m: u64) -> Result<OtocValue> {
    for k in [i, j, r, s] {
        check_mode(f, k)?;
    }
    let u = matrix_power(f, m)?;
    let modes = f.rows();
    let input = FockConfiguration::from_photon_modes(modes, &[i, j])?;
    let output = FockConfiguration::from_photon_modes(modes, &[r, s])?;
    let amp = u[(i, r)] * u[(j, s)] + u[(i, s)] * u[(j, r)];
    let norm = factorial_product(input.occupations()) * factorial_product(output.occupations());
    Ok(OtocValue { order: 4, input, output, m, value: amp.norm_sqr() / norm })
}

/// `𝒞^{(2N)}_{I,F}(m) = |Per U^{(F,I)}(m)|² / (Π n_I! Π n_F!)`.
pub fn otoc_2n(f: &ComplexMatrix, input: &FockConfiguration, output: &FockConfiguration, m: u64) -> Result<OtocValue> {
    let u = matrix_power(f, m)?;
    let value = amplitude(&u, input, output)?.norm_sqr();
    Ok(OtocValue {
        order: 2 * input.total(),
        input: input.clone(),
        output: output.clone(),
        m,
        value,
    })
}

/// Both sides of `𝒞^{(2)} ≈ R₂/M²`, ensemble-averaged at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SffOtocReport {
    pub m: u64,
    pub i: usize,
    pub j: usize,
    /// `⟨|U_ij|²⟩` over the ensemble.
    pub pair: f64,
    /// `⟨(1/M) Σ_i |U_ii|²⟩`, the mode-averaged return probability. Equals 1 at `m = 0`.
    pub return_average: f64,
    /// `⟨1/(M(M−1)) Σ_{i≠j} |U_ij|²⟩`.
    pub offdiagonal_average: f64,
    /// `⟨R₂⟩ / M²`.
    pub sff_side: f64,
    pub pair_deviation: f64,
    pub return_deviation: f64,
}

fn element_at(spec: &QuasienergySpectrum, phases: &[Complex64], i: usize, j: usize) -> Complex64 {
    let c = &spec.overlaps;
    phases
        .iter()
        .enumerate()
        .map(|(a, ph)| c[(i, a)] * c[(j, a)].conj() * ph)
        .sum()
}

/// Compares ensemble averages of `|U_ij(m)|²` with the two-point form factor.
/// The relation is approximate and nothing is asserted here.
pub fn sff_otoc_consistency(spectra: &[QuasienergySpectrum], i: usize, j: usize, m: u64) -> Result<SffOtocReport> {
    let first = spectra.first().ok_or_else(|| Error::invalid("empty ensemble"))?;
    let modes = first.dim();
    if i >= modes || j >= modes {
        return Err(Error::invalid(format!("modes ({i}, {j}) out of range for {modes}")));
    }
    let (mut pair, mut ret, mut off, mut r2) = (0.0, 0.0, 0.0, 0.0);
    for spec in spectra {
        let phases: Vec<Complex64> = spec.xis.iter().map(|&x| Complex64::from_polar(1.0, -x * m as f64)).collect();
        pair += element_at(spec, &phases, i, j).norm_sqr();
        let diag: f64 = (0..modes).map(|k| element_at(spec, &phases, k, k).norm_sqr()).sum();
        ret += diag / modes as f64;
        off += (modes as f64 - diag) / (modes * (modes - 1)) as f64;
        r2 += phases.iter().sum::<Complex64>().norm_sqr();
    }
    let k = spectra.len() as f64;
    let sff_side = r2 / k / (modes * modes) as f64;
    let (pair, ret, off) = (pair / k, ret / k, off / k);
    Ok(SffOtocReport {
        m,
        i,
        j,
        pair,
        return_average: ret,
        offdiagonal_average: off,
        sff_side,
        pair_deviation: (pair - sff_side).abs() / sff_side,
        return_deviation: (ret - sff_side).abs() / sff_side,
    })
}

/// `m,order,value,permanent_path_value` rows.
pub fn write_otoc_csv<W: Write>(mut w: W, rows: &[(OtocValue, f64)]) -> Result<()> {
    writeln!(w, "m,order,value,permanent_path_value")?;
    for (v, p) in rows {
        writeln!(w, "{},{},{:.12e},{:.12e}", v.m, v.order, v.value, p)?;
    }
    Ok(())
}
