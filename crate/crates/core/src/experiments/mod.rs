//! Reproducible experiment drivers behind the command-line tool.
//!
//! Each command resolves a [`RunConfig`], computes, writes its CSV/JSON files
//! into the output directory and finishes with `manifest.json`, which lists
//! every file with its SHA-256. Identical configuration and seed give
//! byte-identical data files regardless of thread count.

mod cache;
mod commands;
mod config;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

pub use cache::{cache_key, cached_ensemble, cached_spectra, sha256_hex};
pub use commands::{
    cmd_classical, cmd_dynamics, cmd_gaussianity, cmd_otoc, cmd_rstats, cmd_sample, cmd_sff, mean_ratio_with_error,
    summarize_sff, RatioSummary, SffSummary, HAAR_STREAM, SAMPLER_STREAM,
};
pub use config::{parse_override, PartMode, RunConfig, KEYS};

use crate::error::{Error, Result};

/// `⟨r⟩` below this is classified Poissonian, above it GOE.
pub const CLASSIFICATION_THRESHOLD: f64 = 0.461;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Rstats,
    Sff,
    Dynamics,
    Otoc,
    Gaussianity,
    Classical,
    Sample,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub overrides: Map<String, Value>,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: Command,
    pub version: &'static str,
    pub config: RunConfig,
    pub wall_clock_seconds: f64,
    pub cache_hit: bool,
    pub files: Vec<FileRecord>,
}

/// Collects the files a command writes.
pub struct Outputs {
    dir: PathBuf,
    names: Vec<String>,
    pub(crate) cache_hit: bool,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Outputs { dir: dir.to_path_buf(), names: Vec::new(), cache_hit: false })
    }

    /// A buffered writer for `name` inside the output directory.
    pub fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        self.names.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn records(&self) -> Result<Vec<FileRecord>> {
        self.names
            .iter()
            .map(|n| {
                let bytes = fs::read(self.dir.join(n))?;
                Ok(FileRecord { path: n.clone(), bytes: bytes.len() as u64, sha256: sha256_hex(&bytes) })
            })
            .collect()
    }
}

/// Resolves the configuration, runs `command` and writes the manifest.
pub fn run(command: Command, opts: &RunOptions) -> Result<RunManifest> {
    let config = RunConfig::resolve(opts.config.as_deref(), opts.overrides.clone())?;
    let start = Instant::now();
    let mut out = Outputs::new(&opts.out)?;
    let cache = opts.cache.as_deref();
    match command {
        Command::Rstats => cmd_rstats(&config, cache, &mut out)?,
        Command::Sff => cmd_sff(&config, cache, &mut out)?,
        Command::Dynamics => cmd_dynamics(&config, &mut out)?,
        Command::Otoc => cmd_otoc(&config, cache, &mut out)?,
        Command::Gaussianity => cmd_gaussianity(&config, cache, &mut out)?,
        Command::Classical => cmd_classical(&config, &mut out)?,
        Command::Sample => cmd_sample(&config, &mut out)?,
    }
    let manifest = RunManifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        cache_hit: out.cache_hit,
        files: out.records()?,
    };
    fs::write(opts.out.join("manifest.json"), serde_json::to_vec_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Process exit status for an error: 2 for bad configuration or input,
/// 3 for numerical failure, 1 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Dimension(_) | Error::CostGuard { .. } | Error::Json(_) => 2,
        Error::Numerical { .. } => 3,
        Error::Io(_) => 1,
    }
}
