//! On-disk ensemble cache: `ensemble.json` plus one binary matrix per member.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{sample_disorder, FloquetEnsemble, FloquetOperator, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{read_matrix, write_matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub params: ModelParams,
    pub master_seed: u64,
    pub count: usize,
}

pub fn member_path(dir: &Path, index: u64) -> PathBuf {
    dir.join(format!("member_{index:05}.bin"))
}

pub fn save_ensemble(dir: &Path, ensemble: &FloquetEnsemble) -> Result<()> {
    let params = *ensemble
        .params()
        .ok_or_else(|| Error::invalid("cannot cache an empty ensemble"))?;
    fs::create_dir_all(dir)?;
    for f in &ensemble.members {
        write_matrix(&member_path(dir, f.realization.index), &f.matrix, "floquet")?;
    }
    let manifest = EnsembleManifest {
        params,
        master_seed: ensemble.master_seed,
        count: ensemble.len(),
    };
    fs::write(dir.join("ensemble.json"), serde_json::to_vec_pretty(&manifest)?)?;
    Ok(())
}

pub fn load_ensemble(dir: &Path) -> Result<FloquetEnsemble> {
    let manifest: EnsembleManifest = serde_json::from_slice(&fs::read(dir.join("ensemble.json"))?)?;
    let members = (0..manifest.count as u64)
        .map(|w| {
            let (matrix, _) = read_matrix(&member_path(dir, w))?;
            if matrix.rows() != manifest.params.modes || !matrix.is_square() {
                return Err(Error::Dimension(format!("cached member {w} has wrong shape")));
            }
            Ok(FloquetOperator {
                params: manifest.params,
                realization: sample_disorder(&manifest.params, manifest.master_seed, w),
                matrix,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FloquetEnsemble {
        members,
        master_seed: manifest.master_seed,
    })
}
