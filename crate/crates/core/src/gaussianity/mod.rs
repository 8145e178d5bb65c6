//! Do the entries of scattering submatrices look like i.i.d. complex
//! Gaussians? Collect them across an ensemble, standardize, and test.

mod swilk;

use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub use swilk::{shapiro_wilk_statistic, MAX_SAMPLES, MIN_SAMPLES};

use crate::error::{Error, Result};
use crate::floquet::{FloquetEnsemble, ModelParams};
use crate::linalg::{multiply, ComplexMatrix};
use crate::spectral::{histogram_on, Histogram};

/// Which components of the complex entries go into a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    /// Real and imaginary parts in one sample.
    #[default]
    Pooled,
    Real,
    Imaginary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSource {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub m: u64,
    pub members: usize,
    pub part: Part,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub source: SampleSource,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample variance with the `n − 1` denominator.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (self.values.len() as f64 - 1.0)
    }
}

/// Entries of `U[rows, cols]` for every matrix, ordered by matrix, then row,
/// then column. Pooled samples interleave real and imaginary parts.
pub fn collect_submatrix_elements(
    matrices: &[ComplexMatrix],
    rows: &[usize],
    cols: &[usize],
    m: u64,
    part: Part,
) -> Result<SampleSet> {
    let mut values = Vec::with_capacity(matrices.len() * rows.len() * cols.len() * 2);
    for u in matrices {
        if rows.iter().any(|&r| r >= u.rows()) || cols.iter().any(|&c| c >= u.cols()) {
            return Err(Error::invalid("submatrix index out of range"));
        }
        for &r in rows {
            for &c in cols {
                let z = u[(r, c)];
                match part {
                    Part::Pooled => values.extend([z.re, z.im]),
                    Part::Real => values.push(z.re),
                    Part::Imaginary => values.push(z.im),
                }
            }
        }
    }
    Ok(SampleSet {
        values,
        source: SampleSource { rows: rows.to_vec(), cols: cols.to_vec(), m, members: matrices.len(), part },
    })
}

/// The selected rows of `F^m` for one unitary, propagated one period at a
/// time: `O(|rows|·M²·m)` instead of forming the full power.
pub fn rows_of_power(f: &ComplexMatrix, rows: &[usize], m: u64) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::from_fn(rows.len(), f.cols(), |a, b| {
        num_complex::Complex64::new(if rows[a] == b { 1.0 } else { 0.0 }, 0.0)
    });
    for _ in 0..m {
        out = multiply(&out, f)?;
    }
    Ok(out)
}

/// Submatrix elements of `F^m` over a kicked-rotor ensemble.
pub fn collect_from_ensemble(
    ensemble: &FloquetEnsemble,
    rows: &[usize],
    cols: &[usize],
    m: u64,
    part: Part,
) -> Result<SampleSet> {
    if rows.len() > ensemble.members.first().map_or(0, |f| f.matrix.rows()) {
        return Err(Error::invalid("more submatrix rows than modes"));
    }
    let local: Vec<usize> = (0..rows.len()).collect();
    let blocks = ensemble
        .members
        .par_iter()
        .map(|f| rows_of_power(&f.matrix, rows, m))
        .collect::<Result<Vec<_>>>()?;
    let mut set = collect_submatrix_elements(&blocks, &local, cols, m, part)?;
    set.source.rows = rows.to_vec();
    Ok(set)
}

/// Zero mean, unit sample variance.
pub fn standardize(s: &SampleSet) -> Result<SampleSet> {
    if s.len() < 2 {
        return Err(Error::invalid("standardizing needs at least 2 samples"));
    }
    if s.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("sample contains non-finite values"));
    }
    let mu = s.mean();
    let sd = s.variance().sqrt();
    if !(sd > 0.0) {
        return Err(Error::invalid("sample has zero variance"));
    }
    Ok(SampleSet { values: s.values.iter().map(|v| (v - mu) / sd).collect(), source: s.source.clone() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub w_statistic: f64,
    pub p_value: f64,
    pub n: usize,
    pub alpha: f64,
    /// `p_value > alpha`: normality is not rejected.
    pub normal: bool,
    /// Original size when a seeded subsample was tested instead.
    pub subsampled_from: Option<usize>,
}

/// Shapiro–Wilk test at level `alpha`. Samples larger than [`MAX_SAMPLES`]
/// are reduced to a subsample drawn with `seed`.
pub fn shapiro_wilk(s: &SampleSet, alpha: f64, seed: u64) -> Result<NormalityReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid(format!("significance level {alpha} outside [0, 1)")));
    }
    let (values, subsampled_from) = if s.len() > MAX_SAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, s.len(), MAX_SAMPLES).into_vec();
        idx.sort_unstable();
        (idx.iter().map(|&k| s.values[k]).collect(), Some(s.len()))
    } else {
        (s.values.clone(), None)
    };
    let (w, p) = shapiro_wilk_statistic(&values)?;
    Ok(NormalityReport { w_statistic: w, p_value: p, n: values.len(), alpha, normal: p > alpha, subsampled_from })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QQSeries {
    /// `(theoretical, sample)` pairs with sample quantiles ascending.
    pub points: Vec<(f64, f64)>,
}

impl QQSeries {
    pub fn first(&self) -> (f64, f64) {
        self.points[0]
    }

    pub fn last(&self) -> (f64, f64) {
        self.points[self.points.len() - 1]
    }
}

/// Sorted sample against standard-normal quantiles at `(i − 0.5)/n`.
pub fn qq_points(s: &SampleSet) -> Result<QQSeries> {
    let n = s.len();
    if n < 2 {
        return Err(Error::invalid("a Q-Q plot needs at least 2 samples"));
    }
    let mut sorted = s.values.clone();
    sorted.sort_by(f64::total_cmp);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let points = sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| (normal.inverse_cdf((i as f64 + 0.5) / n as f64), v))
        .collect();
    Ok(QQSeries { points })
}

/// Density histogram spanning the sample range.
pub fn element_histogram(s: &SampleSet, bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::invalid("histogram needs at least 2 bins"));
    }
    if s.is_empty() {
        return Err(Error::invalid("cannot histogram an empty sample"));
    }
    let lo = s.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::invalid("sample has zero range"));
    }
    Ok(histogram_on(&s.values, lo, hi, bins))
}

/// One entry of `normality.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityRecord {
    pub label: String,
    #[serde(rename = "W")]
    pub w: f64,
    pub p: f64,
    pub n: usize,
    pub alpha: f64,
    pub verdict: &'static str,
    pub params: Option<ModelParams>,
    pub m: u64,
    pub part: Part,
    pub subsampled_from: Option<usize>,
}

impl NormalityRecord {
    pub fn new(label: impl Into<String>, report: &NormalityReport, source: &SampleSource, params: Option<ModelParams>) -> Self {
        NormalityRecord {
            label: label.into(),
            w: report.w_statistic,
            p: report.p_value,
            n: report.n,
            alpha: report.alpha,
            verdict: if report.normal { "normal" } else { "not normal" },
            params,
            m: source.m,
            part: source.part,
            subsampled_from: report.subsampled_from,
        }
    }
}

pub fn write_qq_csv<W: Write>(mut w: W, qq: &QQSeries) -> Result<()> {
    writeln!(w, "theoretical,sample")?;
    for (t, s) in &qq.points {
        writeln!(w, "{t:.12e},{s:.12e}")?;
    }
    Ok(())
}

pub fn write_hist_csv<W: Write>(mut w: W, h: &Histogram) -> Result<()> {
    writeln!(w, "bin_center,density")?;
    for (c, d) in h.centers().iter().zip(&h.density) {
        writeln!(w, "{c:.12e},{d:.12e}")?;
    }
    Ok(())
}

pub fn write_normality_json<W: Write>(w: W, records: &[NormalityRecord]) -> Result<()> {
    serde_json::to_writer_pretty(w, records)?;
    Ok(())
}

#[cfg(test)]
mod tests;
