//! Simulation toolkit for a disordered Floquet photonic circuit that realizes a
//! quantum kicked rotor.
//!
//! A period of the circuit applies a layer of single-mode phase shifters
//! followed by an `M`-port nearest-neighbour beamsplitter. The crate builds the
//! resulting single-particle Floquet unitaries, diagnoses quantum chaos in
//! their quasienergy spectra, simulates multi-photon scattering through
//! matrix permanents, relates scattering probabilities to out-of-time-order
//! correlators, and tests whether scattering submatrices look like i.i.d.
//! complex Gaussians.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, unitary eigendecomposition, Haar sampling
//! * [`floquet`]: circuit construction and disorder ensembles
//! * [`spectral`]: quasienergies, spacing ratios, spectral form factors
//! * [`fock`]: Fock configurations, permanents, output probabilities, sampling
//! * [`otoc`]: OTOCs, time averages and diagonal-ensemble predictions
//! * [`gaussianity`]: Shapiro–Wilk, Q-Q and histogram data for submatrix elements
//! * [`classical`]: the Chirikov map reached in the classical limit
//! * [`experiments`]: configurable runs that emit CSV/JSON artifacts

pub mod classical;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod floquet;
pub mod gaussianity;
pub mod linalg;
pub mod otoc;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
