//! Binary matrix files: interleaved little-endian `(re, im)` f64 pairs in
//! row-major order, plus a JSON sidecar `{rows, cols, kind}` next to them.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub rows: usize,
    pub cols: usize,
    pub kind: String,
}

fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

pub fn encode_matrix(m: &ComplexMatrix) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(16 * m.as_slice().len());
    for z in m.as_slice() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    bytes
}

pub fn decode_matrix(rows: usize, cols: usize, bytes: &[u8]) -> Result<ComplexMatrix> {
    if bytes.len() != 16 * rows * cols {
        return Err(Error::Dimension(format!(
            "expected {} bytes for {rows}x{cols}, found {}",
            16 * rows * cols,
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, data)
}

/// Writes `path` (binary payload) and `path` with a `.json` extension (sidecar).
pub fn write_matrix(path: &Path, m: &ComplexMatrix, kind: &str) -> Result<()> {
    fs::write(path, encode_matrix(m))?;
    let side = MatrixSidecar {
        rows: m.rows(),
        cols: m.cols(),
        kind: kind.to_string(),
    };
    fs::write(sidecar_path(path), serde_json::to_vec_pretty(&side)?)?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<(ComplexMatrix, MatrixSidecar)> {
    let side: MatrixSidecar = serde_json::from_slice(&fs::read(sidecar_path(path))?)?;
    let m = decode_matrix(side.rows, side.cols, &fs::read(path)?)?;
    Ok((m, side))
}
