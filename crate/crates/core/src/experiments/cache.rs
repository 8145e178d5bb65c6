//! Content-addressed cache of ensembles and their spectra.
//!
//! Each entry lives in `<cache>/<sha256 of (params, seed, count)>/` and holds
//! the unitaries plus, once computed, one eigendecomposition per member.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::floquet::{build_ensemble, load_ensemble, save_ensemble, EnsembleManifest, FloquetEnsemble, ModelParams};
use crate::linalg::{read_matrix, write_matrix, ComplexMatrix};
use crate::spectral::{ensemble_spectra, QuasienergySpectrum};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn cache_key(params: &ModelParams, master_seed: u64, count: usize) -> Result<String> {
    let m = EnsembleManifest { params: *params, master_seed, count };
    Ok(sha256_hex(&serde_json::to_vec(&m)?))
}

fn entry_dir(cache: &Path, params: &ModelParams, master_seed: u64, count: usize) -> Result<PathBuf> {
    Ok(cache.join(cache_key(params, master_seed, count)?))
}

fn manifest_matches(dir: &Path, params: &ModelParams, master_seed: u64, count: usize) -> bool {
    let Ok(bytes) = fs::read(dir.join("ensemble.json")) else { return false };
    let Ok(m) = serde_json::from_slice::<EnsembleManifest>(&bytes) else { return false };
    m == EnsembleManifest { params: *params, master_seed, count }
}

/// Loads the ensemble from the cache when present, otherwise builds it and
/// stores it. The flag reports a cache hit.
pub fn cached_ensemble(
    cache: Option<&Path>,
    params: &ModelParams,
    master_seed: u64,
    count: usize,
) -> Result<(FloquetEnsemble, bool)> {
    let Some(cache) = cache else {
        return Ok((build_ensemble(params, master_seed, count)?, false));
    };
    let dir = entry_dir(cache, params, master_seed, count)?;
    if manifest_matches(&dir, params, master_seed, count) {
        return Ok((load_ensemble(&dir)?, true));
    }
    let ens = build_ensemble(params, master_seed, count)?;
    save_ensemble(&dir, &ens)?;
    Ok((ens, false))
}

fn spectrum_paths(dir: &Path, w: usize) -> (PathBuf, PathBuf) {
    (dir.join(format!("xi_{w:05}.bin")), dir.join(format!("overlaps_{w:05}.bin")))
}

/// Spectra of an ensemble, read from or written to the same cache entry.
pub fn cached_spectra(cache: Option<&Path>, ensemble: &FloquetEnsemble) -> Result<(Vec<QuasienergySpectrum>, bool)> {
    let Some(cache) = cache else {
        return Ok((ensemble_spectra(ensemble)?, false));
    };
    let params = ensemble.params().ok_or_else(|| Error::invalid("empty ensemble"))?;
    let dir = entry_dir(cache, params, ensemble.master_seed, ensemble.len())?.join("spectra");
    let all_present = (0..ensemble.len()).all(|w| {
        let (a, b) = spectrum_paths(&dir, w);
        a.exists() && b.exists()
    });
    if all_present {
        let spectra = (0..ensemble.len())
            .map(|w| {
                let (a, b) = spectrum_paths(&dir, w);
                let (xi, _) = read_matrix(&a)?;
                let (overlaps, _) = read_matrix(&b)?;
                Ok(QuasienergySpectrum { xis: xi.as_slice().iter().map(|z| z.re).collect(), overlaps })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok((spectra, true));
    }
    let spectra = ensemble_spectra(ensemble)?;
    fs::create_dir_all(&dir)?;
    for (w, s) in spectra.iter().enumerate() {
        let (a, b) = spectrum_paths(&dir, w);
        let xi = ComplexMatrix::new(s.dim(), 1, s.xis.iter().map(|&x| Complex64::new(x, 0.0)).collect())?;
        write_matrix(&a, &xi, "quasienergies")?;
        write_matrix(&b, &s.overlaps, "floquet-states")?;
    }
    Ok((spectra, false))
}
