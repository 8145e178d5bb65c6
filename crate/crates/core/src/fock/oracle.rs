//! Independent many-body evolution in the Fock basis.
//!
//! Each input creation operator is replaced by `Σ_j U_ij a†_j`, the product is
//! expanded monomial by monomial and the coefficients are collected. Nothing
//! here touches permanents, so it serves as a cross-check of that path.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{factorial_product, hilbert_dim, ConfigurationSpace, FockConfiguration, ProbabilityTable};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest Fock-space dimension the oracle will expand.
pub const ORACLE_DIM_BUDGET: u64 = 5000;

fn check_budget(space: &ConfigurationSpace) -> Result<()> {
    let dim = hilbert_dim(space.modes(), space.photons())?;
    if dim > ORACLE_DIM_BUDGET {
        return Err(Error::CostGuard {
            what: "oracle Hilbert dimension",
            value: dim as u128,
            limit: ORACLE_DIM_BUDGET as u128,
        });
    }
    Ok(())
}

/// Expands `Π_i (Σ_j U_ij a†_j)^{n_i} |0⟩` and returns the normalized state
/// keyed by output occupations.
fn evolve_state(u: &ComplexMatrix, input: &FockConfiguration) -> BTreeMap<Vec<u32>, Complex64> {
    let m = u.rows();
    let mut poly: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    poly.insert(vec![0; m], Complex64::new(1.0, 0.0));
    for (i, &n) in input.occupations().iter().enumerate() {
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (mono, coeff) in &poly {
                for j in 0..m {
                    let uij = u[(i, j)];
                    if uij == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut raised = mono.clone();
                    raised[j] += 1;
                    *next.entry(raised).or_insert(Complex64::new(0.0, 0.0)) += coeff * uij;
                }
            }
            poly = next;
        }
    }
    // (a†)^k |0⟩ = √k! |k⟩
    let norm_in = factorial_product(input.occupations()).sqrt();
    for (mono, coeff) in poly.iter_mut() {
        *coeff *= factorial_product(mono).sqrt() / norm_in;
    }
    poly
}

/// Output distribution of `input` under `u`, from the symbolic expansion.
pub fn fock_evolution_oracle(
    u: &ComplexMatrix,
    input: &FockConfiguration,
    space: &Arc<ConfigurationSpace>,
    m: u64,
) -> Result<ProbabilityTable> {
    space.check_member(input)?;
    if u.rows() != space.modes() || !u.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} unitary for {} modes",
            u.rows(),
            u.cols(),
            space.modes()
        )));
    }
    check_budget(space)?;
    let state = evolve_state(u, input);
    let probs = space
        .configurations()
        .iter()
        .map(|c| state.get(c.occupations()).map_or(0.0, |a| a.norm_sqr()))
        .collect();
    Ok(ProbabilityTable::new(Arc::clone(space), probs, m))
}

/// Full many-body unitary: entry `(a, b)` is the amplitude from configuration
/// `a` to configuration `b` of `space`.
pub fn many_body_unitary(u: &ComplexMatrix, space: &ConfigurationSpace) -> Result<ComplexMatrix> {
    if u.rows() != space.modes() || !u.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} unitary for {} modes",
            u.rows(),
            u.cols(),
            space.modes()
        )));
    }
    check_budget(space)?;
    let d = space.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for (a, input) in space.configurations().iter().enumerate() {
        let state = evolve_state(u, input);
        for (b, output) in space.configurations().iter().enumerate() {
            if let Some(amp) = state.get(output.occupations()) {
                out[(a, b)] = *amp;
            }
        }
    }
    Ok(out)
}
