//! Long-time averages and their diagonal-ensemble predictions.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{amplitude, ConfigurationSpace, FockConfiguration};
use crate::linalg::{multiply, ComplexMatrix};
use crate::spectral::QuasienergySpectrum;

/// Quasienergy gaps below this are treated as degeneracies, which void the
/// diagonal-ensemble argument.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Mean of an observable over `m = 0..horizon`, with the range it took.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeAverage {
    pub observable: String,
    pub horizon: u64,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalEnsemblePrediction {
    pub value: f64,
    /// Each contributing tensor sum, already normalized; they add up to `value`.
    pub terms: Vec<(String, f64)>,
    pub near_degenerate: bool,
    pub min_gap: f64,
}

impl DiagonalEnsemblePrediction {
    fn from_terms(spec: &QuasienergySpectrum, terms: Vec<(String, f64)>) -> Self {
        let min_gap = spec.min_circular_gap();
        DiagonalEnsemblePrediction {
            value: terms.iter().map(|(_, v)| v).sum(),
            terms,
            near_degenerate: min_gap < DEGENERACY_GAP,
            min_gap,
        }
    }
}

/// Runs `horizon` periods, handing the rows of `U(m)` that belong to occupied
/// input modes, and the input restricted to those rows, to `visit`.
fn stream_rows(
    f: &ComplexMatrix,
    input: &FockConfiguration,
    horizon: u64,
    mut visit: impl FnMut(&ComplexMatrix, &FockConfiguration) -> Result<()>,
) -> Result<()> {
    if horizon == 0 {
        return Err(Error::invalid("time-average horizon must be >= 1"));
    }
    if !f.is_square() || f.rows() != input.modes() {
        return Err(Error::Dimension("unitary and input configuration disagree".into()));
    }
    let occupied: Vec<usize> = (0..input.modes()).filter(|&k| input.occupations()[k] > 0).collect();
    let reduced = FockConfiguration::new(occupied.iter().map(|&k| input.occupations()[k]).collect())?;
    let mut rows = ComplexMatrix::from_fn(occupied.len(), f.cols(), |a, b| {
        Complex64::new(if occupied[a] == b { 1.0 } else { 0.0 }, 0.0)
    });
    for m in 0..horizon {
        if m > 0 {
            rows = multiply(&rows, f)?;
        }
        visit(&rows, &reduced)?;
    }
    Ok(())
}

/// Like [`stream_rows`], but hands over the output distribution on `space`.
fn stream_probabilities(
    f: &ComplexMatrix,
    input: &FockConfiguration,
    space: &ConfigurationSpace,
    horizon: u64,
    mut visit: impl FnMut(&[f64]),
) -> Result<()> {
    if space.modes() != input.modes() || space.photons() != input.total() {
        return Err(Error::Dimension("input and configuration space disagree".into()));
    }
    let configs = space.configurations();
    stream_rows(f, input, horizon, |rows, reduced| {
        let probs = if configs.len() > 64 {
            configs
                .par_iter()
                .map(|c| amplitude(rows, reduced, c).map(|a| a.norm_sqr()))
                .collect::<Result<Vec<_>>>()?
        } else {
            configs
                .iter()
                .map(|c| amplitude(rows, reduced, c).map(|a| a.norm_sqr()))
                .collect::<Result<Vec<_>>>()?
        };
        visit(&probs);
        Ok(())
    })
}

struct Running {
    sum: f64,
    min: f64,
    max: f64,
}

impl Running {
    fn new() -> Self {
        Running { sum: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    fn push(&mut self, x: f64) {
        self.sum += x;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    fn finish(self, observable: String, horizon: u64) -> TimeAverage {
        TimeAverage { observable, horizon, value: self.sum / horizon as f64, min: self.min, max: self.max }
    }
}

/// `P̄_F` for every configuration of `space`.
pub fn time_average_probabilities(
    f: &ComplexMatrix,
    input: &FockConfiguration,
    space: &ConfigurationSpace,
    horizon: u64,
) -> Result<Vec<TimeAverage>> {
    let mut acc: Vec<Running> = (0..space.len()).map(|_| Running::new()).collect();
    stream_probabilities(f, input, space, horizon, |probs| {
        for (a, &p) in acc.iter_mut().zip(probs) {
            a.push(p);
        }
    })?;
    Ok(acc
        .into_iter()
        .zip(space.configurations())
        .map(|(a, c)| a.finish(format!("P[{c}]"), horizon))
        .collect())
}

/// `P̄_F` for a single output configuration.
pub fn time_average_probability(
    f: &ComplexMatrix,
    input: &FockConfiguration,
    output: &FockConfiguration,
    horizon: u64,
) -> Result<TimeAverage> {
    if output.modes() != input.modes() || output.total() != input.total() {
        return Err(Error::Dimension("input and output configurations disagree".into()));
    }
    let mut acc = Running::new();
    stream_rows(f, input, horizon, |rows, reduced| {
        acc.push(amplitude(rows, reduced, output)?.norm_sqr());
        Ok(())
    })?;
    Ok(acc.finish(format!("P[{output}]"), horizon))
}

/// `n̄_l` for every mode.
///
/// For a Fock input `⟨n_l(m)⟩ = Σ_k n_k |U_kl(m)|²`: the coherences
/// `⟨a_k† a_k'⟩` vanish, so only the occupied rows of `U(m)` are needed.
pub fn time_average_profile(f: &ComplexMatrix, input: &FockConfiguration, horizon: u64) -> Result<Vec<TimeAverage>> {
    let mut acc: Vec<Running> = (0..input.modes()).map(|_| Running::new()).collect();
    stream_rows(f, input, horizon, |rows, reduced| {
        for (l, a) in acc.iter_mut().enumerate() {
            let n: f64 = (0..rows.rows())
                .map(|k| reduced.occupations()[k] as f64 * rows[(k, l)].norm_sqr())
                .sum();
            a.push(n);
        }
        Ok(())
    })?;
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(l, a)| a.finish(format!("n_{}", l + 1), horizon))
        .collect())
}

/// `n̄_l = (1/𝓜) Σ_{m<𝓜} ⟨n_l(m)⟩`.
pub fn time_average_mean_photon(f: &ComplexMatrix, input: &FockConfiguration, l: usize, horizon: u64) -> Result<TimeAverage> {
    if l >= input.modes() {
        return Err(Error::invalid(format!("mode {l} out of range")));
    }
    Ok(time_average_profile(f, input, horizon)?.swap_remove(l))
}

fn check_indices(spec: &QuasienergySpectrum, idx: &[usize]) -> Result<()> {
    match idx.iter().find(|&&k| k >= spec.dim()) {
        Some(k) => Err(Error::invalid(format!("mode {k} out of range for {} modes", spec.dim()))),
        None => Ok(()),
    }
}

/// `Σ_α |c_iα|² |c_lα|²`.
pub fn diagonal_ensemble_single(spec: &QuasienergySpectrum, i: usize, l: usize) -> Result<DiagonalEnsemblePrediction> {
    check_indices(spec, &[i, l])?;
    let c = &spec.overlaps;
    let v = (0..spec.dim()).map(|a| c[(i, a)].norm_sqr() * c[(l, a)].norm_sqr()).sum();
    Ok(DiagonalEnsemblePrediction::from_terms(spec, vec![("sum_a |c_ia|^2 |c_la|^2".into(), v)]))
}

/// Infinite-time `P̄_F` for photons from modes `(i, j)` to `(r, s)`.
///
/// The four `W` sums and two `S` sums pair `(β, ρ)` with `(α, λ)` and with
/// `(λ, α)`. At `α = λ` the two pairings are the same term, so one copy is
/// removed and reported as the collision correction.
pub fn diagonal_ensemble_two(
    spec: &QuasienergySpectrum,
    i: usize,
    j: usize,
    r: usize,
    s: usize,
) -> Result<DiagonalEnsemblePrediction> {
    check_indices(spec, &[i, j, r, s])?;
    let n = spec.dim();
    let c = &spec.overlaps;
    // direct (r,s) and exchanged (s,r) amplitudes per Floquet pair
    let a = ComplexMatrix::from_fn(n, n, |al, la| c[(i, al)] * c[(r, al)].conj() * c[(j, la)] * c[(s, la)].conj());
    let b = ComplexMatrix::from_fn(n, n, |al, la| c[(i, al)] * c[(s, al)].conj() * c[(j, la)] * c[(r, la)].conj());
    let (mut w_rs_same, mut w_rs_swap, mut w_sr_same, mut w_sr_swap) = (0.0, 0.0, 0.0, 0.0);
    let (mut s_same, mut s_swap) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut collision = 0.0;
    for al in 0..n {
        for la in 0..n {
            let (x, y) = (a[(al, la)], b[(al, la)]);
            let (xt, yt) = (a[(la, al)], b[(la, al)]);
            w_rs_same += x.norm_sqr();
            w_rs_swap += (x * xt.conj()).re;
            w_sr_same += y.norm_sqr();
            w_sr_swap += (y * yt.conj()).re;
            s_same += x * y.conj();
            s_swap += x * yt.conj();
        }
        collision += (a[(al, al)] + b[(al, al)]).norm_sqr();
    }
    let norm = (if i == j { 2.0 } else { 1.0 }) * (if r == s { 2.0 } else { 1.0 });
    let terms = vec![
        ("W_ijrs^{a,l,a,l}".to_string(), w_rs_same / norm),
        ("W_ijrs^{a,l,l,a}".to_string(), w_rs_swap / norm),
        ("W_ijsr^{a,l,a,l}".to_string(), w_sr_same / norm),
        ("W_ijsr^{a,l,l,a}".to_string(), w_sr_swap / norm),
        ("2Re S_ijrs^{a,l,a,l}".to_string(), 2.0 * s_same.re / norm),
        ("2Re S_ijrs^{a,l,l,a}".to_string(), 2.0 * s_swap.re / norm),
        ("collision a=l".to_string(), -collision / norm),
    ];
    Ok(DiagonalEnsemblePrediction::from_terms(spec, terms))
}

/// Two-photon `n̄_l` from the grouping
/// `Σ_{αλ} O^{αλαλ}(|c_lλ|² + |c_lα|²) + O^{αλλα}(|c_lα|² + |c_lλ|²)`
/// with `O^{αλβρ} = c_iα c_jλ c*_iβ c*_jρ`, divided by the input norm.
pub fn mean_photon_two_particle(spec: &QuasienergySpectrum, i: usize, j: usize, l: usize) -> Result<DiagonalEnsemblePrediction> {
    check_indices(spec, &[i, j, l])?;
    let n = spec.dim();
    let c = &spec.overlaps;
    let w: Vec<f64> = (0..n).map(|a| c[(l, a)].norm_sqr()).collect();
    let (mut same_l, mut swap_a, mut swap_l, mut same_a) = (0.0, 0.0, 0.0, 0.0);
    for al in 0..n {
        for la in 0..n {
            let same = c[(i, al)].norm_sqr() * c[(j, la)].norm_sqr();
            let swap = (c[(i, al)] * c[(j, la)] * c[(i, la)].conj() * c[(j, al)].conj()).re;
            same_l += same * w[la];
            swap_a += swap * w[al];
            swap_l += swap * w[la];
            same_a += same * w[al];
        }
    }
    let norm = if i == j { 2.0 } else { 1.0 };
    let terms = vec![
        ("O^{a,l,a,l}|c_l,l|^2".to_string(), same_l / norm),
        ("O^{a,l,l,a}|c_l,a|^2".to_string(), swap_a / norm),
        ("O^{a,l,l,a}|c_l,l|^2".to_string(), swap_l / norm),
        ("O^{a,l,a,l}|c_l,a|^2".to_string(), same_a / norm),
    ];
    Ok(DiagonalEnsemblePrediction::from_terms(spec, terms))
}

/// Finite-horizon average `(1/𝓜) Σ_{m<𝓜} exp(−i(Σ_plus ξ − Σ_minus ξ) m)`.
///
/// Indices shared by both lists cancel before the phase is formed, so any
/// resonant pairing gives exactly 1.
pub fn q_average(xis: &[f64], plus: &[usize], minus: &[usize], horizon: u64) -> Result<Complex64> {
    if horizon == 0 {
        return Err(Error::invalid("time-average horizon must be >= 1"));
    }
    if let Some(k) = plus.iter().chain(minus).find(|&&k| k >= xis.len()) {
        return Err(Error::invalid(format!("level index {k} out of range")));
    }
    let mut count: BTreeMap<usize, i64> = BTreeMap::new();
    for &k in plus {
        *count.entry(k).or_default() += 1;
    }
    for &k in minus {
        *count.entry(k).or_default() -= 1;
    }
    let delta: f64 = count.iter().map(|(&k, &c)| c as f64 * xis[k]).sum();
    if count.values().all(|&c| c == 0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let sum: Complex64 = (0..horizon).map(|m| Complex64::from_polar(1.0, -delta * m as f64)).sum();
    Ok(sum / horizon as f64)
}

/// One line of `equilibration.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibrationRecord {
    pub observable: String,
    pub time_average: f64,
    pub diagonal_prediction: f64,
    pub relative_gap: f64,
    pub flags: Vec<String>,
}

impl EquilibrationRecord {
    pub fn new(average: &TimeAverage, prediction: &DiagonalEnsemblePrediction) -> Self {
        let mut flags = Vec::new();
        if prediction.near_degenerate {
            flags.push(format!("near-degenerate spectrum (min gap {:.3e})", prediction.min_gap));
        }
        EquilibrationRecord {
            observable: average.observable.clone(),
            time_average: average.value,
            diagonal_prediction: prediction.value,
            relative_gap: (average.value - prediction.value).abs() / prediction.value.abs(),
            flags,
        }
    }
}

pub fn write_equilibration_json<W: Write>(w: W, records: &[EquilibrationRecord]) -> Result<()> {
    serde_json::to_writer_pretty(w, records)?;
    Ok(())
}

#[cfg(test)]
mod tests;
