//! Drives a configurable run programmatically and lists its output files.

use photonic_chaos::experiments::{run, Command, RunOptions};
use serde_json::json;

fn main() -> photonic_chaos::Result<()> {
    let out = std::env::temp_dir().join("photonic-chaos-example");
    let overrides = json!({"M": 40, "count": 10, "point": "localized"});
    let opts = RunOptions {
        overrides: overrides.as_object().cloned().unwrap_or_default(),
        out: out.clone(),
        ..Default::default()
    };
    let manifest = run(Command::Rstats, &opts)?;
    println!("{} in {:.2} s", out.display(), manifest.wall_clock_seconds);
    for f in manifest.files {
        println!("{:>8} B  {}  {}", f.bytes, &f.sha256[..12], f.path);
    }
    Ok(())
}
