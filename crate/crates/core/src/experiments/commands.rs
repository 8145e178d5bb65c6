//! One function per subcommand. Each validates what it needs from the
//! configuration before any heavy work, then writes its files via [`Outputs`].

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{cached_ensemble, cached_spectra, Outputs, RunConfig, CLASSIFICATION_THRESHOLD};
use crate::classical::{self, phase_portrait, write_orbit_csv, write_portrait_csv, RotorState};
use crate::error::{Error, Result};
use crate::floquet::{build_floquet, realization_rng, sample_disorder, ModelParams};
use crate::fock::{
    amplitude, enumerate_configurations, exact_sampler, photon_dynamics, probability_table, write_dynamics_csv,
    write_probs_csv, write_samples, FockConfiguration,
};
use crate::gaussianity::{
    collect_from_ensemble, collect_submatrix_elements, element_histogram, qq_points, shapiro_wilk, standardize,
    write_hist_csv, write_normality_json, write_qq_csv, NormalityRecord, Part,
};
use crate::linalg::{haar_unitary, matrix_power, ComplexMatrix};
use crate::otoc::{
    diagonal_ensemble_single, diagonal_ensemble_two, mean_photon_two_particle, otoc_2, otoc_2n, otoc_4,
    sff_otoc_consistency, time_average_probability, time_average_profile, write_equilibration_json,
    write_otoc_csv, EquilibrationRecord,
};
use crate::spectral::{
    heisenberg_time, mean_ratio, mean_spacing, quasienergies_of, ratio_histogram, sff_2n, sff_goe_analytic,
    spacing_ratios, QuasienergySpectrum, SffSeries, SpacingRatios,
};

/// First generator stream used for Haar draws; disorder uses streams `0..count`.
pub const HAAR_STREAM: u64 = 1 << 40;
/// Generator stream of the exact sampler.
pub const SAMPLER_STREAM: u64 = 1 << 41;

fn classify(mean_r: f64) -> &'static str {
    if mean_r < CLASSIFICATION_THRESHOLD { "poisson" } else { "goe" }
}

fn write_json<T: Serialize>(out: &mut Outputs, name: &str, value: &T) -> Result<()> {
    let mut w = out.create(name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `N` photons in the central modes, or the configured input list.
fn photon_modes(cfg: &RunConfig, key: &str, list: &Option<Vec<usize>>, default_n: usize) -> Result<Vec<usize>> {
    let n = cfg.photons.unwrap_or(default_n);
    match list {
        Some(modes) if cfg.photons.is_some_and(|n| n != modes.len()) => Err(Error::invalid(format!(
            "field `{key}`: lists {} photons but N = {n}",
            modes.len()
        ))),
        Some(modes) if modes.is_empty() => Err(Error::invalid(format!("field `{key}`: empty mode list"))),
        Some(modes) => Ok(modes.clone()),
        None if n > cfg.modes => Err(Error::invalid(format!("field `N`: {n} photons need explicit modes when M = {}", cfg.modes))),
        None => {
            let start = (cfg.modes - n) / 2;
            Ok((start..start + n).collect())
        }
    }
}

fn member_zero(params: &ModelParams, seed: u64) -> Result<ComplexMatrix> {
    Ok(build_floquet(params, &sample_disorder(params, seed, 0))?.matrix)
}

/// Pooled mean spacing ratio with the standard error of the member means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub mean_r: f64,
    pub std_err: f64,
    pub members: usize,
    /// Ratios with a zero denominator, replaced by 1.
    pub degenerate: usize,
}

pub fn mean_ratio_with_error(spectra: &[QuasienergySpectrum]) -> Result<(RatioSummary, Vec<SpacingRatios>)> {
    let ratios = spectra.iter().map(spacing_ratios).collect::<Result<Vec<_>>>()?;
    let means: Vec<f64> = ratios.iter().map(SpacingRatios::mean).collect();
    let k = means.len() as f64;
    let avg = means.iter().sum::<f64>() / k;
    let std_err = if means.len() > 1 {
        (means.iter().map(|x| (x - avg).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    } else {
        f64::NAN
    };
    let summary = RatioSummary {
        mean_r: mean_ratio(spectra)?,
        std_err,
        members: spectra.len(),
        degenerate: ratios.iter().map(|r| r.degenerate.len()).sum(),
    };
    Ok((summary, ratios))
}

fn point_spectra(
    params: &ModelParams,
    cfg: &RunConfig,
    cache: Option<&Path>,
    out: &mut Outputs,
) -> Result<Vec<QuasienergySpectrum>> {
    let (ens, hit_e) = cached_ensemble(cache, params, cfg.seed, cfg.count)?;
    let (spectra, hit_s) = cached_spectra(cache, &ens)?;
    out.cache_hit = hit_e && hit_s;
    Ok(spectra)
}

#[derive(Serialize)]
struct RstatsSummary {
    mean_r: f64,
    std_err: f64,
    class: &'static str,
    members: usize,
    degenerate: usize,
    #[serde(rename = "tau_H")]
    tau_h: f64,
    params: ModelParams,
}

/// `rstats.csv` (every ratio), `rstats_hist.csv` and `rstats.json`; with a
/// sweep, `rstats_sweep.csv` holds one row per `(θ, W)` pair instead.
pub fn cmd_rstats(cfg: &RunConfig, cache: Option<&Path>, out: &mut Outputs) -> Result<()> {
    if let (Some(thetas), Some(ws)) = (&cfg.sweep_theta_units, &cfg.sweep_disorder_units) {
        let grid = thetas
            .iter()
            .flat_map(|&t| ws.iter().map(move |&w| (t, w)))
            .map(|(t, w)| Ok((t, w, ModelParams::in_kick_units(cfg.modes, cfg.trap, w, t)?.with_boundary(cfg.boundary))))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::with_capacity(grid.len());
        let mut all_hit = true;
        for (t, w, params) in grid {
            let spectra = point_spectra(&params, cfg, cache, out)?;
            all_hit &= out.cache_hit;
            rows.push((t, w, mean_ratio_with_error(&spectra)?.0));
        }
        out.cache_hit = all_hit;
        let mut f = out.create("rstats_sweep.csv")?;
        writeln!(f, "theta_units,W_units,mean_r,std_err,class")?;
        for (t, w, s) in rows {
            writeln!(f, "{t},{w},{:.12e},{:.12e},{}", s.mean_r, s.std_err, classify(s.mean_r))?;
        }
        f.flush()?;
        return Ok(());
    }
    let params = cfg.params()?;
    let spectra = point_spectra(&params, cfg, cache, out)?;
    let (summary, ratios) = mean_ratio_with_error(&spectra)?;
    let mut f = out.create("rstats.csv")?;
    writeln!(f, "r")?;
    for r in ratios.iter().flat_map(|s| &s.ratios) {
        writeln!(f, "{r:.12e}")?;
    }
    f.flush()?;
    let hist = ratio_histogram(&ratios, cfg.bins)?;
    let mut f = out.create("rstats_hist.csv")?;
    write_hist_csv(&mut f, &hist)?;
    f.flush()?;
    let json = RstatsSummary {
        mean_r: summary.mean_r,
        std_err: summary.std_err,
        class: classify(summary.mean_r),
        members: summary.members,
        degenerate: summary.degenerate,
        tau_h: heisenberg_time(&spectra)?,
        params,
    };
    write_json(out, "rstats.json", &json)
}

/// Landmarks of an ensemble-averaged form factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SffSummary {
    pub modes: usize,
    pub ensemble_size: usize,
    pub n_points: u32,
    #[serde(rename = "tau_H")]
    pub tau_h: f64,
    pub value_at_zero: f64,
    /// The dip is searched on `1..=dip_window_end`, with `dip_window_end = ⌈2√M⌉`.
    pub dip_window_end: u64,
    pub dip_time: u64,
    pub dip_value: f64,
    /// `[⌈2τ_H⌉, ⌊4τ_H⌋]` when the series reaches it.
    pub plateau_window: Option<(u64, u64)>,
    pub plateau_mean: Option<f64>,
    /// `plateau_mean / M`.
    pub plateau_ratio: Option<f64>,
}

pub fn summarize_sff(series: &SffSeries, tau_h: f64, modes: usize) -> Result<SffSummary> {
    let last = *series.times.last().ok_or_else(|| Error::invalid("empty SFF series"))?;
    if last == 0 {
        return Err(Error::invalid("SFF series needs m_max >= 1"));
    }
    let dip_window_end = ((2.0 * (modes as f64).sqrt()).ceil() as u64).min(last);
    let (dip_time, dip_value) = (1..=dip_window_end as usize)
        .map(|m| (m as u64, series.values[m]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("window is non-empty");
    let (lo, hi) = ((2.0 * tau_h).ceil() as u64, (4.0 * tau_h).floor() as u64);
    let (plateau_window, plateau_mean) = if hi <= last && lo <= hi {
        let w = &series.values[lo as usize..=hi as usize];
        (Some((lo, hi)), Some(w.iter().sum::<f64>() / w.len() as f64))
    } else {
        (None, None)
    };
    Ok(SffSummary {
        modes,
        ensemble_size: series.ensemble_size,
        n_points: series.n_points,
        tau_h,
        value_at_zero: series.values[0],
        dip_window_end,
        dip_time,
        dip_value,
        plateau_window,
        plateau_mean,
        plateau_ratio: plateau_mean.map(|p| p / modes as f64),
    })
}

#[derive(Serialize)]
struct SffJson {
    mean_r: f64,
    #[serde(rename = "tau_H")]
    tau_h: f64,
    mean_spacing: f64,
    params: ModelParams,
    summary: SffSummary,
}

/// `sff.csv` (`m, R2N, goe_ref`) and `sff.json`. The GOE reference is only
/// defined for the two-point factor and is left empty otherwise.
pub fn cmd_sff(cfg: &RunConfig, cache: Option<&Path>, out: &mut Outputs) -> Result<()> {
    let params = cfg.params()?;
    let m_max = cfg.m_max.unwrap_or(5 * cfg.modes as u64);
    if m_max == 0 {
        return Err(Error::invalid("field `m_max`: must be >= 1"));
    }
    let spectra = point_spectra(&params, cfg, cache, out)?;
    let series = sff_2n(&spectra, cfg.sff_n, m_max)?;
    let tau_h = heisenberg_time(&spectra)?;
    let goe = if cfg.sff_n == 1 {
        let times: Vec<f64> = series.times.iter().map(|&m| m as f64).collect();
        Some(sff_goe_analytic(&times, cfg.modes, tau_h)?)
    } else {
        None
    };
    let mut f = out.create("sff.csv")?;
    writeln!(f, "m,R2N,goe_ref")?;
    for (k, (m, v)) in series.times.iter().zip(&series.values).enumerate() {
        match &goe {
            Some(g) => writeln!(f, "{m},{v:.12e},{:.12e}", g[k])?,
            None => writeln!(f, "{m},{v:.12e},")?,
        }
    }
    f.flush()?;
    let json = SffJson {
        mean_r: mean_ratio(&spectra)?,
        tau_h,
        mean_spacing: mean_spacing(&spectra)?,
        params,
        summary: summarize_sff(&series, tau_h, cfg.modes)?,
    };
    write_json(out, "sff.json", &json)
}

/// Kicked-rotor and Haar photon dynamics: `dynamics.csv`, `probs.csv` and
/// their `_haar` counterparts, for disorder realization 0.
pub fn cmd_dynamics(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let params = cfg.params()?;
    let modes = photon_modes(cfg, "input", &cfg.input, 2)?;
    let input = FockConfiguration::from_photon_modes(cfg.modes, &modes)?;
    let space = Arc::new(enumerate_configurations(cfg.modes, modes.len())?);
    let m_max = cfg.m_max.unwrap_or(cfg.modes as u64);
    let kicked = member_zero(&params, cfg.seed)?;
    let haar = haar_unitary(cfg.modes, &mut realization_rng(cfg.seed, HAAR_STREAM))?;
    for (suffix, u) in [("", &kicked), ("_haar", &haar)] {
        let tables = photon_dynamics(u, &input, &space, m_max)?;
        let mut f = out.create(&format!("dynamics{suffix}.csv"))?;
        write_dynamics_csv(&mut f, &tables)?;
        f.flush()?;
        let mut f = out.create(&format!("probs{suffix}.csv"))?;
        write_probs_csv(&mut f, &tables)?;
        f.flush()?;
    }
    Ok(())
}

/// Time points for the form-factor comparison: early times and multiples of `τ_H`.
fn comparison_times(tau_h: f64) -> Vec<u64> {
    let mut t: Vec<u64> = [0.0, 1.0, 0.25 * tau_h, 0.5 * tau_h, tau_h, 2.0 * tau_h, 4.0 * tau_h]
        .iter()
        .map(|x| x.round() as u64)
        .collect();
    t.sort_unstable();
    t.dedup();
    t
}

/// `otoc.csv`, `equilibration.json` and `sff_otoc.json`.
///
/// Correlators are evaluated on realization 0 for `m = 0..=m_max` between the
/// configured input and output modes (output defaults to the input).
/// Equilibration compares time averages over `horizon` periods with the
/// diagonal ensemble of the same realization.
pub fn cmd_otoc(cfg: &RunConfig, cache: Option<&Path>, out: &mut Outputs) -> Result<()> {
    let params = cfg.params()?;
    let ins = photon_modes(cfg, "input", &cfg.input, 2)?;
    let outs = match &cfg.output {
        Some(_) => photon_modes(cfg, "output", &cfg.output, 2)?,
        None => ins.clone(),
    };
    if ins.len() != outs.len() {
        return Err(Error::invalid("field `output`: photon count differs from `input`"));
    }
    let m_max = cfg.m_max.unwrap_or(20);
    let horizon = cfg.horizon_or_default();
    let input = FockConfiguration::from_photon_modes(cfg.modes, &ins)?;
    let output = FockConfiguration::from_photon_modes(cfg.modes, &outs)?;
    let f = member_zero(&params, cfg.seed)?;

    let rows = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let u = matrix_power(&f, m)?;
            let mut row = Vec::new();
            let path = |i: &FockConfiguration, o: &FockConfiguration| amplitude(&u, i, o).map(|a| a.norm_sqr());
            let single = |k: usize| FockConfiguration::single(cfg.modes, k);
            row.push((otoc_2(&f, ins[0], outs[0], m)?, path(&single(ins[0])?, &single(outs[0])?)?));
            if ins.len() >= 2 {
                let v = otoc_4(&f, ins[0], ins[1], outs[0], outs[1], m)?;
                let p = path(&v.input, &v.output)?;
                row.push((v, p));
            }
            if ins.len() >= 3 {
                row.push((otoc_2n(&f, &input, &output, m)?, path(&input, &output)?));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = out.create("otoc.csv")?;
    write_otoc_csv(&mut w, &rows.into_iter().flatten().collect::<Vec<_>>())?;
    w.flush()?;

    let spec = quasienergies_of(&f)?;
    let mut records = Vec::new();
    let profile = time_average_profile(&f, &FockConfiguration::single(cfg.modes, ins[0])?, horizon)?;
    for (l, avg) in profile.iter().enumerate() {
        records.push(EquilibrationRecord::new(avg, &diagonal_ensemble_single(&spec, ins[0], l)?));
    }
    if ins.len() >= 2 {
        let (i, j, r, s) = (ins[0], ins[1], outs[0], outs[1]);
        let pair_in = FockConfiguration::from_photon_modes(cfg.modes, &[i, j])?;
        let pair_out = FockConfiguration::from_photon_modes(cfg.modes, &[r, s])?;
        let avg = time_average_probability(&f, &pair_in, &pair_out, horizon)?;
        records.push(EquilibrationRecord::new(&avg, &diagonal_ensemble_two(&spec, i, j, r, s)?));
        let profile = time_average_profile(&f, &pair_in, horizon)?;
        for (l, avg) in profile.iter().enumerate() {
            let mut avg = avg.clone();
            avg.observable = format!("two-photon {}", avg.observable);
            records.push(EquilibrationRecord::new(&avg, &mean_photon_two_particle(&spec, i, j, l)?));
        }
    }
    let mut w = out.create("equilibration.json")?;
    write_equilibration_json(&mut w, &records)?;
    writeln!(w)?;
    w.flush()?;

    let spectra = point_spectra(&params, cfg, cache, out)?;
    let tau_h = heisenberg_time(&spectra)?;
    let reports = comparison_times(tau_h)
        .into_iter()
        .map(|m| sff_otoc_consistency(&spectra, ins[0], outs[0], m))
        .collect::<Result<Vec<_>>>()?;
    write_json(out, "sff_otoc.json", &reports)
}

fn part_name(part: Part) -> &'static str {
    match part {
        Part::Pooled => "pooled",
        Part::Real => "real",
        Part::Imaginary => "imaginary",
    }
}

/// `qq*.csv`, `hist*.csv` and `normality.json` for the `N × N` block of
/// `F^m` over the ensemble, and over Haar unitaries when `haar` is set.
pub fn cmd_gaussianity(cfg: &RunConfig, cache: Option<&Path>, out: &mut Outputs) -> Result<()> {
    let params = cfg.params()?;
    let n = cfg.photons.unwrap_or(5);
    let first_n = |key: &str, list: &Option<Vec<usize>>| -> Result<Vec<usize>> {
        match list {
            Some(l) if l.len() != n => Err(Error::invalid(format!("field `{key}`: needs {n} modes"))),
            Some(l) => Ok(l.clone()),
            None if n > cfg.modes => Err(Error::invalid(format!("field `N`: {n} exceeds M = {}", cfg.modes))),
            None => Ok((0..n).collect()),
        }
    };
    let rows = first_n("input", &cfg.input)?;
    let cols = first_n("output", &cfg.output)?;
    let parts = cfg.part.parts();
    let (ens, hit) = cached_ensemble(cache, &params, cfg.seed, cfg.count)?;
    out.cache_hit = hit;

    let mut records = Vec::new();
    let mut emit = |out: &mut Outputs, label: String, set: crate::gaussianity::SampleSet, params: Option<ModelParams>| -> Result<()> {
        let report = shapiro_wilk(&set, cfg.alpha, cfg.seed)?;
        let z = standardize(&set)?;
        let mut w = out.create(&format!("qq{label}.csv"))?;
        write_qq_csv(&mut w, &qq_points(&z)?)?;
        w.flush()?;
        let mut w = out.create(&format!("hist{label}.csv"))?;
        write_hist_csv(&mut w, &element_histogram(&z, cfg.bins)?)?;
        w.flush()?;
        let name = if label.is_empty() { "kicked".to_string() } else { label.trim_start_matches('_').to_string() };
        records.push(NormalityRecord::new(name, &report, &set.source, params));
        Ok(())
    };
    for &part in &parts {
        let label = if parts.len() == 1 && part == Part::Pooled { String::new() } else { format!("_{}", part_name(part)) };
        let set = collect_from_ensemble(&ens, &rows, &cols, cfg.m, part)?;
        emit(out, label, set, Some(params))?;
    }
    if cfg.haar {
        let unitaries = (0..cfg.count as u64)
            .into_par_iter()
            .map(|k| haar_unitary(cfg.modes, &mut realization_rng(cfg.seed, HAAR_STREAM + k)))
            .collect::<Result<Vec<_>>>()?;
        for &part in &parts {
            let label = if part == Part::Pooled { "_haar".to_string() } else { format!("_haar_{}", part_name(part)) };
            let set = collect_submatrix_elements(&unitaries, &rows, &cols, 0, part)?;
            emit(out, label, set, None)?;
        }
    }
    let mut w = out.create("normality.json")?;
    write_normality_json(&mut w, &records)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PortraitIndex {
    index: usize,
    kbar: f64,
    file: String,
}

/// `orbit.csv` from `(X0, k0)` and one `portrait_<i>.csv` per kick strength.
/// Portrait orbits start at `k = k0` with `X` evenly spread over `(−π, π)`.
pub fn cmd_classical(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let kbars = match &cfg.kbar {
        Some(list) if list.is_empty() => return Err(Error::invalid("field `kbar`: empty list")),
        Some(list) if list.iter().any(|k| !k.is_finite()) => return Err(Error::invalid("field `kbar`: must be finite")),
        Some(list) => list.clone(),
        None => {
            let p = cfg.params()?;
            vec![classical::kbar(p.theta, p.trap)]
        }
    };
    if cfg.orbits == 0 {
        return Err(Error::invalid("field `orbits`: need at least one orbit"));
    }
    let trace = classical::orbit(RotorState::new(cfg.x0, cfg.k0), kbars[0], cfg.steps);
    let mut w = out.create("orbit.csv")?;
    write_orbit_csv(&mut w, &trace)?;
    w.flush()?;
    let initials: Vec<RotorState> = (0..cfg.orbits)
        .map(|a| RotorState::new(-PI + 2.0 * PI * (a as f64 + 0.5) / cfg.orbits as f64, cfg.k0))
        .collect();
    let mut index = Vec::with_capacity(kbars.len());
    for (i, &k) in kbars.iter().enumerate() {
        let file = format!("portrait_{i}.csv");
        let mut w = out.create(&file)?;
        write_portrait_csv(&mut w, &phase_portrait(&initials, k, cfg.steps))?;
        w.flush()?;
        index.push(PortraitIndex { index: i, kbar: k, file });
    }
    write_json(out, "classical.json", &index)
}

/// `samples.txt` drawn from `P_F` at time `m`, plus the `probs.csv` it came from.
pub fn cmd_sample(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let params = cfg.params()?;
    let modes = photon_modes(cfg, "input", &cfg.input, 2)?;
    let input = FockConfiguration::from_photon_modes(cfg.modes, &modes)?;
    let space = Arc::new(enumerate_configurations(cfg.modes, modes.len())?);
    let u = matrix_power(&member_zero(&params, cfg.seed)?, cfg.m)?;
    let table = probability_table(&u, &input, &space, cfg.m)?;
    let samples = exact_sampler(&table, &mut realization_rng(cfg.seed, SAMPLER_STREAM), cfg.shots);
    let mut w = out.create("samples.txt")?;
    write_samples(&mut w, &samples)?;
    w.flush()?;
    let mut w = out.create("probs.csv")?;
    write_probs_csv(&mut w, std::slice::from_ref(&table))?;
    w.flush()?;
    Ok(())
}
