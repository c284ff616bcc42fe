//! Parses a run configuration and executes it, writing the same artifacts as
//! `hydroelastic simulate`.
//!
//!     cargo run --release --example config_run -- [config] [out_dir]
//!
//! Defaults to `examples/mode_k2.cfg` and `examples/out/mode_k2`.

use std::path::{Path, PathBuf};

use hydroelastic::cli::{run_simulation, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let here = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut args = std::env::args().skip(1);
    let cfg_path = args.next().map(PathBuf::from).unwrap_or_else(|| here.join("mode_k2.cfg"));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| here.join("out/mode_k2"));

    let cfg = RunConfig::load(&cfg_path)?;
    print!("{}", cfg.to_ini());
    let base = cfg_path.parent().unwrap_or(Path::new("."));
    let summary = run_simulation(&cfg, base, &out)?;
    println!("{summary:#?}");
    println!("artifacts in {}", out.display());
    Ok(())
}
