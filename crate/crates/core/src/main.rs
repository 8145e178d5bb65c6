use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use photonic_chaos::error::{Error, Result};
use photonic_chaos::experiments::{exit_code, parse_override, run, Command, RunOptions};

#[derive(Parser)]
#[command(version, about = "Kicked-rotor photonic circuit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Ensemble and spectrum cache directory.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Configuration override `KEY=VALUE`, repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Spacing-ratio statistics, optionally over a (θ, W) grid.
    Rstats,
    /// Spectral form factor with the GOE reference.
    Sff,
    /// Photon-number dynamics for kicked-rotor and Haar circuits.
    Dynamics,
    /// Correlators, equilibration and the form-factor link.
    Otoc,
    /// Shapiro–Wilk test of submatrix elements.
    Gaussianity,
    /// Orbits and phase portraits of the classical map.
    Classical,
    /// Exact boson sampling.
    Sample,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Rstats => Command::Rstats,
            Cmd::Sff => Command::Sff,
            Cmd::Dynamics => Command::Dynamics,
            Cmd::Otoc => Command::Otoc,
            Cmd::Gaussianity => Command::Gaussianity,
            Cmd::Classical => Command::Classical,
            Cmd::Sample => Command::Sample,
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidInput("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    let mut overrides = Map::new();
    for s in &cli.overrides {
        let (k, v) = parse_override(s)?;
        overrides.insert(k, v);
    }
    if let Some(seed) = cli.seed {
        overrides.insert("seed".into(), Value::from(seed));
    }
    let opts = RunOptions { config: cli.config, overrides, out: cli.out, cache: cli.cache };
    let manifest = run(cli.command.into(), &opts)?;
    for f in &manifest.files {
        println!("{}  {}", f.sha256, opts.out.join(&f.path).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
