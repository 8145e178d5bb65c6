//! The disordered kicked-rotor circuit.
//!
//! One period applies the phase-shifter layer `U₁ = diag(e^{-iφ̃_j})` and then
//! the multiport beamsplitter `U₂ = exp(−iθA)`, where `A` is the
//! nearest-neighbour adjacency matrix of the mode chain. The Floquet operator
//! is `F = U₂U₁`. Units are `ħ = T = 1`, so quasienergies are angles.

mod cache;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{matrix_power, multiply, ComplexMatrix};

pub use cache::{load_ensemble, save_ensemble, EnsembleManifest};

/// Drive period. Fixed.
pub const PERIOD: f64 = 1.0;
/// Reduced Planck constant. Fixed.
pub const HBAR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Mode `M` couples back to mode `1`.
    #[default]
    Periodic,
    Open,
}

/// Circuit parameters. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(rename = "M")]
    pub modes: usize,
    /// Beamsplitter angle θ.
    pub theta: f64,
    /// Harmonic trap strength Φ.
    #[serde(rename = "Phi")]
    pub trap: f64,
    /// Disorder half-width W.
    #[serde(rename = "W")]
    pub disorder: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

impl ModelParams {
    pub fn new(modes: usize, theta: f64, trap: f64, disorder: f64) -> Result<Self> {
        let p = Self {
            modes,
            theta,
            trap,
            disorder,
            boundary: Boundary::Periodic,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with θ and W given in units of `1/(16Φ)`, the scale on
    /// which the classical kick strength `K̄ = 16θΦ` is read off directly.
    pub fn in_kick_units(modes: usize, trap: f64, disorder_units: f64, theta_units: f64) -> Result<Self> {
        if trap == 0.0 {
            return Err(Error::invalid("kick units need a nonzero trap strength"));
        }
        let unit = 1.0 / (16.0 * trap);
        Self::new(modes, theta_units * unit, trap, disorder_units * unit)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes < 2 {
            return Err(Error::invalid(format!("M must be >= 2, got {}", self.modes)));
        }
        if !(self.disorder >= 0.0) || !self.disorder.is_finite() {
            return Err(Error::invalid(format!("W must be finite and >= 0, got {}", self.disorder)));
        }
        if !self.theta.is_finite() || !self.trap.is_finite() {
            return Err(Error::invalid("theta and Phi must be finite"));
        }
        Ok(())
    }
}

/// Named points of the (W, θ) plane at Φ = π/4, in units of `1/(16Φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterPoint {
    /// W = 7, θ = 7.4: disorder-dominated, Poissonian statistics.
    Localized,
    /// W = 3.5, θ = 7.4: between the two regimes.
    Crossover,
    /// W = 2, θ = 7.4: chaotic, GOE statistics.
    ChaoticWeakDisorder,
    /// W = 3, θ = 18: chaotic, GOE statistics.
    ChaoticStrongKick,
}

impl ParameterPoint {
    pub const ALL: [ParameterPoint; 4] = [
        ParameterPoint::Localized,
        ParameterPoint::Crossover,
        ParameterPoint::ChaoticWeakDisorder,
        ParameterPoint::ChaoticStrongKick,
    ];

    /// `(W, θ)` in units of `1/(16Φ)`.
    pub fn units(self) -> (f64, f64) {
        match self {
            ParameterPoint::Localized => (7.0, 7.4),
            ParameterPoint::Crossover => (3.5, 7.4),
            ParameterPoint::ChaoticWeakDisorder => (2.0, 7.4),
            ParameterPoint::ChaoticStrongKick => (3.0, 18.0),
        }
    }

    /// Parameters at Φ = π/4 with `modes` modes.
    pub fn params(self, modes: usize) -> ModelParams {
        let (w, th) = self.units();
        ModelParams::in_kick_units(modes, PI / 4.0, w, th).expect("preset is valid")
    }
}

/// Uniform on-site angles for one disorder realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub deltas: Vec<f64>,
    pub seed: u64,
    pub index: u64,
}

#[derive(Debug, Clone)]
pub struct FloquetOperator {
    pub params: ModelParams,
    pub realization: DisorderRealization,
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct FloquetEnsemble {
    pub members: Vec<FloquetOperator>,
    pub master_seed: u64,
}

impl FloquetEnsemble {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn params(&self) -> Option<&ModelParams> {
        self.members.first().map(|f| &f.params)
    }
}

/// Harmonic trap angles `φ_j = (4Φ/M²)(j − M/2)²` for `j = 1..M`.
pub fn phase_profile(params: &ModelParams) -> Vec<f64> {
    let m = params.modes as f64;
    let c = 4.0 * params.trap / (m * m);
    (1..=params.modes)
        .map(|j| {
            let d = j as f64 - m / 2.0;
            c * d * d
        })
        .collect()
}

/// The per-realization generator: ChaCha8 seeded with `master_seed`, on
/// stream `index`. Streams are independent, so any realization can be
/// regenerated without drawing the others.
pub fn realization_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

pub fn sample_disorder(params: &ModelParams, master_seed: u64, index: u64) -> DisorderRealization {
    let deltas = if params.disorder > 0.0 {
        let mut rng = realization_rng(master_seed, index);
        let dist = Uniform::new_inclusive(-params.disorder, params.disorder).expect("finite width");
        (0..params.modes).map(|_| dist.sample(&mut rng)).collect()
    } else {
        vec![0.0; params.modes]
    };
    DisorderRealization {
        deltas,
        seed: master_seed,
        index,
    }
}

/// Phase-shifter layer `diag(e^{-i(φ_j + δ_j)})`.
pub fn build_u1(params: &ModelParams, realization: &DisorderRealization) -> Result<ComplexMatrix> {
    if realization.deltas.len() != params.modes {
        return Err(Error::Dimension(format!(
            "realization has {} angles for {} modes",
            realization.deltas.len(),
            params.modes
        )));
    }
    let diag: Vec<Complex64> = phase_profile(params)
        .iter()
        .zip(&realization.deltas)
        .map(|(phi, delta)| Complex64::from_polar(1.0, -(phi + delta)))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// Beamsplitter layer `exp(−iθA)`, evaluated in the exact eigenbasis of `A`.
pub fn build_u2(params: &ModelParams) -> ComplexMatrix {
    let m = params.modes;
    match params.boundary {
        Boundary::Periodic => {
            // circulant: entry (j, l) depends only on (j − l) mod M
            let ks: Vec<f64> = (0..m).map(|s| 2.0 * PI * s as f64 / m as f64).collect();
            let weights: Vec<Complex64> = ks
                .iter()
                .map(|&k| Complex64::from_polar(1.0 / m as f64, -2.0 * params.theta * k.cos()))
                .collect();
            let by_offset: Vec<Complex64> = (0..m)
                .map(|d| {
                    ks.iter()
                        .zip(&weights)
                        .map(|(&k, &w)| w * Complex64::from_polar(1.0, -k * d as f64))
                        .sum()
                })
                .collect();
            ComplexMatrix::from_fn(m, m, |j, l| by_offset[(j + m - l) % m])
        }
        Boundary::Open => {
            let norm = 2.0 / (m as f64 + 1.0);
            let modes: Vec<(f64, Vec<f64>)> = (1..=m)
                .map(|s| {
                    let q = PI * s as f64 / (m as f64 + 1.0);
                    let vec = (1..=m).map(|j| (q * j as f64).sin()).collect();
                    (2.0 * q.cos(), vec)
                })
                .collect();
            ComplexMatrix::from_fn(m, m, |j, l| {
                modes
                    .iter()
                    .map(|(e, v)| Complex64::from_polar(norm * v[j] * v[l], -params.theta * e))
                    .sum()
            })
        }
    }
}

pub fn build_floquet(params: &ModelParams, realization: &DisorderRealization) -> Result<FloquetOperator> {
    params.validate()?;
    let u1 = build_u1(params, realization)?;
    let u2 = build_u2(params);
    Ok(FloquetOperator {
        params: *params,
        realization: realization.clone(),
        matrix: multiply(&u2, &u1)?,
    })
}

/// Builds realizations `0..count` in parallel; the result does not depend on
/// scheduling.
pub fn build_ensemble(params: &ModelParams, master_seed: u64, count: usize) -> Result<FloquetEnsemble> {
    if count == 0 {
        return Err(Error::invalid("ensemble needs at least one member"));
    }
    params.validate()?;
    let members = (0..count as u64)
        .into_par_iter()
        .map(|w| build_floquet(params, &sample_disorder(params, master_seed, w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FloquetEnsemble { members, master_seed })
}

/// `U_S(mT) = F^m`.
pub fn stroboscopic_unitary(f: &FloquetOperator, m: u64) -> ComplexMatrix {
    matrix_power(&f.matrix, m).expect("Floquet matrix is square")
}

#[cfg(test)]
mod tests;
