//! Classical limit of the circuit: the Chirikov standard map on a cylinder.
//!
//! `X_{n+1} = X_n + K̄ sin k_n`, `k_{n+1} = k_n + X_{n+1}`, with `k` wrapped to
//! `(−π, π]` and `X` left unbounded.

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// `K̄ = 16 θ Φ`.
pub fn kbar(theta: f64, trap: f64) -> f64 {
    16.0 * theta * trap
}

pub fn wrap_phase(k: f64) -> f64 {
    let w = k.rem_euclid(2.0 * PI);
    if w > PI { w - 2.0 * PI } else { w }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorState {
    /// Rescaled momentum `X`.
    pub x: f64,
    /// Phase `k` in `(−π, π]`.
    pub k: f64,
}

impl RotorState {
    pub fn new(x: f64, k: f64) -> Self {
        RotorState { x, k: wrap_phase(k) }
    }

    /// The same point in the circuit's own chart `(x, k)`, `X = −8Φ(x − 1/2)`.
    pub fn to_original(self, trap: f64) -> OriginalState {
        OriginalState { x: 0.5 - self.x / (8.0 * trap), k: self.k }
    }
}

/// Phase-space point in the unscaled position coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginalState {
    pub x: f64,
    pub k: f64,
}

impl OriginalState {
    pub fn to_rescaled(self, trap: f64) -> RotorState {
        RotorState { x: -8.0 * trap * (self.x - 0.5), k: self.k }
    }

    /// `x' = x − 2θ sin k`, `k' = k − 8Φ(x' − 1/2)`.
    pub fn step(self, theta: f64, trap: f64) -> Self {
        let x = self.x - 2.0 * theta * self.k.sin();
        OriginalState { x, k: wrap_phase(self.k - 8.0 * trap * (x - 0.5)) }
    }
}

pub fn chirikov_step(s: RotorState, kbar: f64) -> RotorState {
    let x = s.x + kbar * s.k.sin();
    RotorState { x, k: wrap_phase(s.k + x) }
}

/// Undoes [`chirikov_step`]: recover `k` first, then `X`.
pub fn inverse_step(s: RotorState, kbar: f64) -> RotorState {
    let k = wrap_phase(s.k - s.x);
    RotorState { x: s.x - kbar * k.sin(), k }
}

/// `∂(X', k')/∂(X, k)` at `s`.
pub fn jacobian(s: RotorState, kbar: f64) -> [[f64; 2]; 2] {
    let c = kbar * s.k.cos();
    [[1.0, c], [1.0, 1.0 + c]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub kbar: f64,
    /// `states[0]` is the initial condition; `states.len() == steps + 1`.
    pub states: Vec<RotorState>,
}

impl OrbitTrace {
    pub fn initial(&self) -> RotorState {
        self.states[0]
    }

    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }
}

pub fn orbit(initial: RotorState, kbar: f64, steps: usize) -> OrbitTrace {
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = RotorState::new(initial.x, initial.k);
    states.push(s);
    for _ in 0..steps {
        s = chirikov_step(s, kbar);
        states.push(s);
    }
    OrbitTrace { kbar, states }
}

/// One orbit per initial condition, in input order.
pub fn phase_portrait(initials: &[RotorState], kbar: f64, steps: usize) -> Vec<OrbitTrace> {
    initials.par_iter().map(|&s| orbit(s, kbar, steps)).collect()
}

/// Initial conditions on a `rows × cols` grid over `X ∈ [x_lo, x_hi]`,
/// `k ∈ (−π, π]`.
pub fn grid_initials(rows: usize, cols: usize, x_lo: f64, x_hi: f64) -> Vec<RotorState> {
    let mut out = Vec::with_capacity(rows * cols);
    for a in 0..rows {
        let x = if rows == 1 { x_lo } else { x_lo + (x_hi - x_lo) * a as f64 / (rows - 1) as f64 };
        for b in 0..cols {
            out.push(RotorState::new(x, -PI + 2.0 * PI * (b as f64 + 0.5) / cols as f64));
        }
    }
    out
}

/// Variance of `X_n` for `n = 0..=steps` over an ensemble started at `X = x0`
/// with uniformly random phases.
pub fn momentum_variance<R: Rng + ?Sized>(kbar: f64, x0: f64, orbits: usize, steps: usize, rng: &mut R) -> Vec<f64> {
    let mut states: Vec<RotorState> = (0..orbits)
        .map(|_| RotorState::new(x0, PI - 2.0 * PI * rng.random::<f64>()))
        .collect();
    let var = |states: &[RotorState]| {
        let n = states.len() as f64;
        let mean = states.iter().map(|s| s.x).sum::<f64>() / n;
        states.iter().map(|s| (s.x - mean).powi(2)).sum::<f64>() / n
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(var(&states));
    for _ in 0..steps {
        states.iter_mut().for_each(|s| *s = chirikov_step(*s, kbar));
        out.push(var(&states));
    }
    out
}

/// `n,X,k` rows for one orbit.
pub fn write_orbit_csv<W: Write>(mut w: W, trace: &OrbitTrace) -> Result<()> {
    writeln!(w, "n,X,k")?;
    for (n, s) in trace.states.iter().enumerate() {
        writeln!(w, "{n},{:.12e},{:.12e}", s.x, s.k)?;
    }
    Ok(())
}

/// `orbit,n,X,k` rows for many orbits.
pub fn write_portrait_csv<W: Write>(mut w: W, traces: &[OrbitTrace]) -> Result<()> {
    writeln!(w, "orbit,n,X,k")?;
    for (o, t) in traces.iter().enumerate() {
        for (n, s) in t.states.iter().enumerate() {
            writeln!(w, "{o},{n},{:.12e},{:.12e}", s.x, s.k)?;
        }
    }
    Ok(())
}
