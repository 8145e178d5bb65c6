//! Multi-photon configurations, scattering submatrices and output
//! probabilities of a linear-optical network.
//!
//! A photon entering mode `i` leaves as `Σ_j U_ij a†_j`, so the amplitude to
//! go from occupation `I` to `F` is `Per(U^{(F,I)}) / √(Π n_I! Π n_F!)`, where
//! the submatrix takes rows from the input occupations and columns from the
//! output occupations.

mod oracle;
mod permanent;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use oracle::{fock_evolution_oracle, many_body_unitary, ORACLE_DIM_BUDGET};
pub use permanent::{permanent_ryser, MAX_PERMANENT_ORDER};

use crate::error::{Error, Result};
use crate::linalg::{multiply, ComplexMatrix, TOLERANCES};

/// Largest configuration space [`enumerate_configurations`] will materialize.
pub const ENUMERATION_BUDGET: u64 = 2_000_000;

/// Occupation numbers `(n_1, …, n_M)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockConfiguration {
    occupations: Vec<u32>,
}

impl FockConfiguration {
    pub fn new(occupations: Vec<u32>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::invalid("a configuration needs at least one mode"));
        }
        Ok(FockConfiguration { occupations })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::new(vec![0; modes])
    }

    /// One photon per listed mode; repeated modes stack.
    pub fn from_photon_modes(modes: usize, photons: &[usize]) -> Result<Self> {
        let mut occ = vec![0; modes];
        for &p in photons {
            if p >= modes {
                return Err(Error::invalid(format!("mode {p} out of range for {modes} modes")));
            }
            occ[p] += 1;
        }
        Self::new(occ)
    }

    pub fn single(modes: usize, mode: usize) -> Result<Self> {
        Self::from_photon_modes(modes, &[mode])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn total(&self) -> usize {
        self.occupations.iter().map(|&n| n as usize).sum()
    }

    /// Mode index of each photon, ascending, with multiplicity.
    pub fn photon_modes(&self) -> Vec<usize> {
        self.occupations
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| std::iter::repeat_n(j, n as usize))
            .collect()
    }
}

impl fmt::Display for FockConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, n) in self.occupations.iter().enumerate() {
            if k > 0 {
                f.write_str("-")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for FockConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let occ = s
            .split('-')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad occupation {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(occ)
    }
}

pub(crate) fn factorial_product(occ: &[u32]) -> f64 {
    occ.iter()
        .map(|&n| (2..=n).map(f64::from).product::<f64>())
        .product()
}

/// Number of ways to place `n` bosons in `m` modes, `binomial(m+n−1, n)`.
pub fn hilbert_dim(m: usize, n: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::invalid("hilbert_dim needs at least one mode"));
    }
    let overflow = || Error::CostGuard {
        what: "Hilbert dimension",
        value: u128::MAX,
        limit: u64::MAX as u128,
    };
    // c_k = binomial(m−1+k, k), exact at every step
    let mut c: u128 = 1;
    for k in 1..=n as u128 {
        c = c.checked_mul(m as u128 - 1 + k).ok_or_else(overflow)? / k;
        if c > u64::MAX as u128 {
            return Err(overflow());
        }
    }
    Ok(c as u64)
}

/// All configurations of `photons` bosons in `modes` modes, in ascending
/// lexicographic order of the occupation vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationSpace {
    modes: usize,
    photons: usize,
    configurations: Vec<FockConfiguration>,
}

impl ConfigurationSpace {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn configurations(&self) -> &[FockConfiguration] {
        &self.configurations
    }

    pub fn len(&self) -> usize {
        self.configurations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configurations.is_empty()
    }

    pub fn index_of(&self, c: &FockConfiguration) -> Option<usize> {
        self.configurations.binary_search(c).ok()
    }

    pub(crate) fn check_member(&self, c: &FockConfiguration) -> Result<()> {
        if c.modes() != self.modes || c.total() != self.photons {
            return Err(Error::invalid(format!(
                "configuration {c} does not belong to the ({}, {}) space",
                self.modes, self.photons
            )));
        }
        Ok(())
    }
}

pub fn enumerate_configurations(modes: usize, photons: usize) -> Result<ConfigurationSpace> {
    let dim = hilbert_dim(modes, photons)?;
    if dim > ENUMERATION_BUDGET {
        return Err(Error::CostGuard {
            what: "configuration count",
            value: dim as u128,
            limit: ENUMERATION_BUDGET as u128,
        });
    }
    fn fill(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<FockConfiguration>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(FockConfiguration { occupations: cur.clone() });
            return;
        }
        for k in 0..=left {
            cur[pos] = k;
            fill(pos + 1, left - k, cur, out);
        }
    }
    let mut configurations = Vec::with_capacity(dim as usize);
    fill(0, photons as u32, &mut vec![0; modes], &mut configurations);
    Ok(ConfigurationSpace { modes, photons, configurations })
}

/// `U^{(F,I)}` with its defining configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSubmatrix {
    pub matrix: ComplexMatrix,
    pub input: FockConfiguration,
    pub output: FockConfiguration,
}

pub fn submatrix(
    u: &ComplexMatrix,
    input: &FockConfiguration,
    output: &FockConfiguration,
) -> Result<ScatteringSubmatrix> {
    if input.total() != output.total() {
        return Err(Error::invalid(format!(
            "photon numbers differ: input {} vs output {}",
            input.total(),
            output.total()
        )));
    }
    if input.modes() != u.rows() || output.modes() != u.cols() {
        return Err(Error::Dimension(format!(
            "configurations over {}/{} modes for a {}x{} matrix",
            input.modes(),
            output.modes(),
            u.rows(),
            u.cols()
        )));
    }
    Ok(ScatteringSubmatrix {
        matrix: u.select(&input.photon_modes(), &output.photon_modes()),
        input: input.clone(),
        output: output.clone(),
    })
}

/// Transition amplitude `γ_F` from `input` to `output`.
pub fn amplitude(u: &ComplexMatrix, input: &FockConfiguration, output: &FockConfiguration) -> Result<Complex64> {
    let sub = submatrix(u, input, output)?;
    let per = permanent_ryser(&sub.matrix)?;
    let norm = (factorial_product(input.occupations()) * factorial_product(output.occupations())).sqrt();
    Ok(per / norm)
}

/// Output distribution over a configuration space at stroboscopic time `m`.
#[derive(Debug, Clone)]
pub struct ProbabilityTable {
    space: Arc<ConfigurationSpace>,
    probs: Vec<f64>,
    m: u64,
}

impl ProbabilityTable {
    pub(crate) fn new(space: Arc<ConfigurationSpace>, probs: Vec<f64>, m: u64) -> Self {
        ProbabilityTable { space, probs, m }
    }

    pub fn space(&self) -> &Arc<ConfigurationSpace> {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn time(&self) -> u64 {
        self.m
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn prob_of(&self, c: &FockConfiguration) -> Option<f64> {
        self.space.index_of(c).map(|k| self.probs[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockConfiguration, f64)> {
        self.space.configurations().iter().zip(self.probs.iter().copied())
    }
}

/// `P_F = |γ_F|²` for every configuration of `space`.
pub fn probability_table(
    u: &ComplexMatrix,
    input: &FockConfiguration,
    space: &Arc<ConfigurationSpace>,
    m: u64,
) -> Result<ProbabilityTable> {
    space.check_member(input)?;
    let probs = space
        .configurations()
        .par_iter()
        .map(|out| amplitude(u, input, out).map(|a| a.norm_sqr()))
        .collect::<Result<Vec<_>>>()?;
    let table = ProbabilityTable::new(Arc::clone(space), probs, m);
    let err = (table.total() - 1.0).abs();
    if err > TOLERANCES.prob_norm_fail {
        return Err(Error::Numerical { what: "probability normalization", worst: err });
    }
    Ok(table)
}

/// `⟨n_l⟩ = Σ_F n_l^{(F)} P_F`.
pub fn mean_photon_number(table: &ProbabilityTable, l: usize) -> f64 {
    table.iter().map(|(c, p)| c.occupations()[l] as f64 * p).sum()
}

/// `⟨n_l⟩` for every mode.
pub fn mean_photon_profile(table: &ProbabilityTable) -> Vec<f64> {
    let mut out = vec![0.0; table.space.modes()];
    for (c, p) in table.iter() {
        for (o, &n) in out.iter_mut().zip(c.occupations()) {
            *o += n as f64 * p;
        }
    }
    out
}

/// Independent draws from the table by inverting its cumulative sum.
pub fn exact_sampler<R: Rng + ?Sized>(table: &ProbabilityTable, rng: &mut R, shots: usize) -> Vec<FockConfiguration> {
    let mut cdf = Vec::with_capacity(table.probs.len());
    let mut acc = 0.0;
    for &p in &table.probs {
        acc += p;
        cdf.push(acc);
    }
    let configs = table.space.configurations();
    (0..shots)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let k = cdf.partition_point(|&c| c <= u).min(configs.len() - 1);
            configs[k].clone()
        })
        .collect()
}

/// Probability tables at `m = 0..=m_max` under repeated application of `f`.
pub fn photon_dynamics(
    f: &ComplexMatrix,
    input: &FockConfiguration,
    space: &Arc<ConfigurationSpace>,
    m_max: u64,
) -> Result<Vec<ProbabilityTable>> {
    let mut power = ComplexMatrix::identity(f.rows());
    let mut out = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        if m > 0 {
            power = multiply(&power, f)?;
        }
        out.push(probability_table(&power, input, space, m)?);
    }
    Ok(out)
}

/// `m,l,mean_n` rows, modes numbered from 1.
pub fn write_dynamics_csv<W: Write>(mut w: W, tables: &[ProbabilityTable]) -> Result<()> {
    writeln!(w, "m,l,mean_n")?;
    for t in tables {
        for (l, n) in mean_photon_profile(t).iter().enumerate() {
            writeln!(w, "{},{},{:.12e}", t.m, l + 1, n)?;
        }
    }
    Ok(())
}

/// `m,config,P` rows.
pub fn write_probs_csv<W: Write>(mut w: W, tables: &[ProbabilityTable]) -> Result<()> {
    writeln!(w, "m,config,P")?;
    for t in tables {
        for (c, p) in t.iter() {
            writeln!(w, "{},{},{:.12e}", t.m, c, p)?;
        }
    }
    Ok(())
}

/// One dash-separated configuration per line.
pub fn write_samples<W: Write>(mut w: W, samples: &[FockConfiguration]) -> Result<()> {
    for s in samples {
        writeln!(w, "{s}")?;
    }
    Ok(())
}
