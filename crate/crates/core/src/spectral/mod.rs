//! Quasienergy statistics: spacing ratios, spectral form factors, the GOE
//! reference curve and the Heisenberg time.
//!
//! No unfolding is applied anywhere. Spacings are taken between neighbours in
//! the sorted list on `(−π, π]`; the spacing that wraps across the branch cut
//! is never used.

mod bessel;
pub mod surrogate;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j1, bessel_j1_asymptotic, bessel_j1_series};

use crate::error::{Error, Result};
use crate::floquet::{FloquetEnsemble, FloquetOperator};
use crate::linalg::{eig_unitary, multiply, ComplexMatrix};

/// Mean spacing ratio of uncorrelated levels.
pub const MEAN_R_POISSON: f64 = 0.38629;
/// Mean spacing ratio of the Gaussian orthogonal ensemble.
pub const MEAN_R_GOE: f64 = 0.53590;

/// Sorted quasienergies and the matching Floquet-state overlaps `c_{i,α} = ⟨i|α⟩`
/// (column `α` of `overlaps`).
#[derive(Debug, Clone)]
pub struct QuasienergySpectrum {
    pub xis: Vec<f64>,
    pub overlaps: ComplexMatrix,
}

impl QuasienergySpectrum {
    pub fn dim(&self) -> usize {
        self.xis.len()
    }

    /// Nearest-neighbour spacings `ξ_{α+1} − ξ_α`, `M − 1` of them.
    pub fn spacings(&self) -> Vec<f64> {
        self.xis.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Smallest gap between eigenphases on the circle, including the wrap.
    pub fn min_circular_gap(&self) -> f64 {
        let n = self.xis.len();
        if n < 2 {
            return f64::INFINITY;
        }
        let wrap = self.xis[0] + 2.0 * PI - self.xis[n - 1];
        self.spacings().into_iter().fold(wrap, f64::min)
    }

    /// `Σ_α e^{-iξ_α m}`, equal to `Tr F^m`.
    pub fn trace_power(&self, m: i64) -> Complex64 {
        self.xis
            .iter()
            .map(|&xi| Complex64::from_polar(1.0, -xi * m as f64))
            .sum()
    }
}

/// Maps an eigenphase `−arg λ` into `(−π, π]`.
fn to_branch(xi: f64) -> f64 {
    if xi <= -PI {
        xi + 2.0 * PI
    } else if xi > PI {
        xi - 2.0 * PI
    } else {
        xi
    }
}

/// Quasienergies of any unitary matrix.
pub fn quasienergies_of(u: &ComplexMatrix) -> Result<QuasienergySpectrum> {
    let dec = eig_unitary(u)?;
    let n = dec.dim();
    let raw: Vec<f64> = dec.eigenvalues.iter().map(|l| to_branch(-l.arg())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let xis = order.iter().map(|&a| raw[a]).collect();
    let v = &dec.eigenvectors;
    let overlaps = ComplexMatrix::from_fn(n, n, |i, a| v[(i, order[a])]);
    Ok(QuasienergySpectrum { xis, overlaps })
}

pub fn quasienergies(f: &FloquetOperator) -> Result<QuasienergySpectrum> {
    quasienergies_of(&f.matrix)
}

/// Spectra of every ensemble member, in member order.
pub fn ensemble_spectra(ensemble: &FloquetEnsemble) -> Result<Vec<QuasienergySpectrum>> {
    ensemble.members.par_iter().map(quasienergies).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingRatios {
    pub ratios: Vec<f64>,
    /// Positions where both neighbouring spacings vanish; their ratio is set to 1.
    pub degenerate: Vec<usize>,
}

impl SpacingRatios {
    pub fn mean(&self) -> f64 {
        self.ratios.iter().sum::<f64>() / self.ratios.len() as f64
    }
}

/// `r_α = min(s_α, s_{α−1}) / max(s_α, s_{α−1})` for a sorted level list.
pub fn ratios_of_levels(levels: &[f64]) -> Result<SpacingRatios> {
    if levels.len() < 3 {
        return Err(Error::invalid(format!("spacing ratios need >= 3 levels, got {}", levels.len())));
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("levels must be sorted ascending"));
    }
    let s: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let mut degenerate = Vec::new();
    let ratios = s
        .windows(2)
        .enumerate()
        .map(|(a, w)| {
            let (lo, hi) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
            if hi == 0.0 {
                degenerate.push(a);
                1.0
            } else {
                lo / hi
            }
        })
        .collect();
    Ok(SpacingRatios { ratios, degenerate })
}

pub fn spacing_ratios(spec: &QuasienergySpectrum) -> Result<SpacingRatios> {
    ratios_of_levels(&spec.xis)
}

/// Ensemble- and spectrum-averaged ratio `⟨r⟩`.
pub fn mean_ratio(spectra: &[QuasienergySpectrum]) -> Result<f64> {
    let levels: Vec<&[f64]> = spectra.iter().map(|s| s.xis.as_slice()).collect();
    mean_ratio_of_levels(&levels)
}

pub fn mean_ratio_of_levels(levels: &[&[f64]]) -> Result<f64> {
    if levels.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let mut total = 0.0;
    for l in levels {
        total += ratios_of_levels(l)?.mean();
    }
    Ok(total / levels.len() as f64)
}

/// Density histogram on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `Σ density · width`.
    pub fn integral(&self) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.density)
            .map(|(w, d)| d * (w[1] - w[0]))
            .sum()
    }
}

pub(crate) fn histogram_on(values: &[f64], lo: f64, hi: f64, bins: usize) -> Histogram {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = (((v - lo) / width).floor() as isize).clamp(0, bins as isize - 1) as usize;
        counts[b] += 1;
    }
    let n = values.len() as f64;
    Histogram {
        edges: (0..=bins).map(|b| lo + b as f64 * width).collect(),
        density: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
    }
}

/// Normalized `P(r)` over all members' ratios.
pub fn ratio_histogram(ratios: &[SpacingRatios], bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::invalid("histogram needs at least 2 bins"));
    }
    let all: Vec<f64> = ratios.iter().flat_map(|r| r.ratios.iter().copied()).collect();
    if all.is_empty() {
        return Err(Error::invalid("no ratios to histogram"));
    }
    Ok(histogram_on(&all, 0.0, 1.0, bins))
}

/// Ensemble-averaged `2N`-point spectral form factor on `m = 0..=m_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SffSeries {
    pub n_points: u32,
    pub times: Vec<u64>,
    pub values: Vec<f64>,
    pub ensemble_size: usize,
}

fn average_series(per_member: Vec<Vec<f64>>, n_points: u32, m_max: u64) -> SffSeries {
    let len = m_max as usize + 1;
    let mut values = vec![0.0; len];
    // summed in member order so the result is reproducible
    for series in &per_member {
        for (v, x) in values.iter_mut().zip(series) {
            *v += x;
        }
    }
    let k = per_member.len() as f64;
    values.iter_mut().for_each(|v| *v /= k);
    SffSeries {
        n_points,
        times: (0..=m_max).collect(),
        values,
        ensemble_size: per_member.len(),
    }
}

/// `R_{2N}(m) = |Σ_α e^{-iξ_α m}|^{2N}` averaged over the spectra.
pub fn sff_2n(spectra: &[QuasienergySpectrum], n_points: u32, m_max: u64) -> Result<SffSeries> {
    if n_points == 0 {
        return Err(Error::invalid("SFF order N must be >= 1"));
    }
    if spectra.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let per_member = spectra
        .par_iter()
        .map(|s| {
            (0..=m_max)
                .map(|m| s.trace_power(m as i64).norm_sqr().powi(n_points as i32))
                .collect()
        })
        .collect();
    Ok(average_series(per_member, n_points, m_max))
}

/// Same quantity from traces of explicit matrix powers `F^m`.
pub fn sff_2n_from_traces(ensemble: &FloquetEnsemble, n_points: u32, m_max: u64) -> Result<SffSeries> {
    if n_points == 0 {
        return Err(Error::invalid("SFF order N must be >= 1"));
    }
    if ensemble.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let per_member = ensemble
        .members
        .par_iter()
        .map(|f| {
            let mut power = ComplexMatrix::identity(f.matrix.rows());
            let mut out = Vec::with_capacity(m_max as usize + 1);
            for m in 0..=m_max {
                if m > 0 {
                    power = multiply(&power, &f.matrix)?;
                }
                out.push(power.trace().norm_sqr().powi(n_points as i32));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(average_series(per_member, n_points, m_max))
}

/// Analytic two-point form factor of the GOE at times `m` (in periods):
///
/// `M² r(m)² + M K(m/τ_H)`, with `r(m) = τ_H J₁(4Mm/τ_H) / (2Mm)` and
/// `K(τ) = 2τ − τ ln(1 + 2τ)` for `τ ≤ 1`, `2 − τ ln((2τ+1)/(2τ−1))` beyond.
pub fn sff_goe_analytic(times: &[f64], modes: usize, tau_h: f64) -> Result<Vec<f64>> {
    if !(tau_h > 0.0) {
        return Err(Error::invalid(format!("Heisenberg time must be positive, got {tau_h}")));
    }
    let m = modes as f64;
    Ok(times
        .iter()
        .map(|&t| {
            let tau = t / tau_h;
            let r = if t == 0.0 {
                1.0
            } else {
                tau_h * bessel_j1(4.0 * m * t / tau_h) / (2.0 * m * t)
            };
            let k = if tau <= 1.0 {
                2.0 * tau - tau * (1.0 + 2.0 * tau).ln()
            } else {
                2.0 - tau * ((2.0 * tau + 1.0) / (2.0 * tau - 1.0)).ln()
            };
            m * m * r * r + m * k
        })
        .collect())
}

/// Mean nearest-neighbour spacing over all members (no wrap-around spacing).
pub fn mean_spacing(spectra: &[QuasienergySpectrum]) -> Result<f64> {
    if spectra.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for s in spectra {
        if s.dim() < 2 {
            return Err(Error::invalid("spacing needs >= 2 levels"));
        }
        total += s.spacings().iter().sum::<f64>();
        count += s.dim() - 1;
    }
    Ok(total / count as f64)
}

/// `τ_H = 2πħ/⟨s⟩`, in periods.
pub fn heisenberg_time(spectra: &[QuasienergySpectrum]) -> Result<f64> {
    Ok(2.0 * PI / mean_spacing(spectra)?)
}
