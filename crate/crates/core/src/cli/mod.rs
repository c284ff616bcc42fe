//! Command implementations behind the `hydroelastic` binary, plus the
//! configuration and file formats they use.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure (including failed verification checks), 3 L² guard trip.

mod config;
mod io;

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::diagnostics::{conservation_drift, verify_suite, DiagnosticsRow, VerifyOptions, VerifyReport};
use crate::dtn::DtnOperator;
use crate::elliptic::StripOptions;
use crate::error::{Error, Result};
use crate::evolution::{simulate_with, Event};
use crate::spectral::{Grid, RealField};

pub use config::{GridConfig, InitConfig, OutputConfig, RunConfig, SolverSection, TimeConfig};
pub use io::{
    format_row, grid_hash, read_diagnostics, read_snapshot, read_vector, write_snapshot, write_vector,
    DiagnosticsWriter, Snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardTripped { .. } => EXIT_GUARD,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// What a completed simulation wrote.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulateSummary {
    pub out_dir: PathBuf,
    pub steps: usize,
    pub dt: f64,
    pub snapshots: Vec<PathBuf>,
    pub diagnostics_rows: usize,
    pub energy_drift: f64,
}

pub fn snapshot_name(index: usize) -> String {
    format!("snap_{index:06}.bin")
}

/// Runs `cfg` and writes `manifest.json`, `diagnostics.csv`,
/// `snapshots/snap_NNNNNN.bin` and, for the Picard scheme, `picard.csv`
/// into `out_dir`. `base` resolves a relative initial-data path.
///
/// The manifest is written on failure too, with the error recorded.
pub fn run_simulation(cfg: &RunConfig, base: &Path, out_dir: &Path) -> Result<SimulateSummary> {
    let run = cfg.run(base)?;
    let snap_dir = out_dir.join("snapshots");
    std::fs::create_dir_all(&snap_dir)?;
    let mut csv = DiagnosticsWriter::create(&out_dir.join("diagnostics.csv"))?;
    let mut picard = match cfg.time.scheme {
        crate::evolution::Scheme::Picard => {
            let mut w = std::io::BufWriter::new(std::fs::File::create(out_dir.join("picard.csv"))?);
            std::io::Write::write_all(&mut w, b"step,iterations,max_ratio\n")?;
            Some(w)
        }
        _ => None,
    };
    let mut snapshots = Vec::new();
    let mut rows: Vec<DiagnosticsRow> = Vec::new();
    let mut picard_steps = 0usize;
    let outcome = simulate_with(&run, |e| {
        match e {
            Event::Snapshot(s) => {
                let name = snapshot_name(snapshots.len());
                write_snapshot(&snap_dir.join(&name), s)?;
                snapshots.push(PathBuf::from("snapshots").join(name));
            }
            Event::Diagnostics(r) => {
                csv.push(r)?;
                rows.push(r.clone());
            }
            Event::Picard(tr) => {
                picard_steps += 1;
                if let Some(w) = picard.as_mut() {
                    let max = tr.ratios().into_iter().fold(0.0, f64::max);
                    std::io::Write::write_all(
                        w,
                        format!("{picard_steps},{},{max:.16e}\n", tr.iterations()).as_bytes(),
                    )?;
                }
            }
        }
        Ok(())
    });
    if let Some(mut w) = picard {
        std::io::Write::flush(&mut w)?;
    }
    let (steps, dt) = run.schedule();
    let drift = conservation_drift(&rows).0;
    let status = match &outcome {
        Ok(_) => json!({ "state": "completed" }),
        Err(e) => json!({ "state": "failed", "exit_code": exit_code(e), "error": e.to_string() }),
    };
    let config: serde_json::Map<String, serde_json::Value> = cfg
        .entries()
        .into_iter()
        .fold(serde_json::Map::new(), |mut m, (sec, key, value)| {
            m.entry(sec)
                .or_insert_with(|| json!({}))
                .as_object_mut()
                .expect("section is an object")
                .insert(key.to_string(), json!(value));
            m
        });
    let manifest = json!({
        "code_version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "grid_hash": grid_hash(cfg.grid.n, cfg.grid.length, cfg.grid.depth, cfg.grid.nz),
        "steps": steps,
        "dt": dt,
        "snapshots": snapshots.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "diagnostics": "diagnostics.csv",
        "energy_drift": drift,
        "status": status,
    });
    std::fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n",
    )?;
    outcome?;
    Ok(SimulateSummary {
        out_dir: out_dir.to_path_buf(),
        steps,
        dt,
        snapshots,
        diagnostics_rows: rows.len(),
        energy_drift: drift,
    })
}

/// `hydroelastic simulate`. `out_dir` overrides the config's `[output] dir`.
pub fn cmd_simulate(config_path: &Path, out_dir: Option<&Path>) -> i32 {
    let base = config_path.parent().unwrap_or(Path::new("."));
    let result = RunConfig::load(config_path)
        .map_err(|e| match e {
            Error::Config { line, message } => {
                Error::InvalidArgument(format!("{}:{line}: {message}", config_path.display()))
            }
            e => e,
        })
        .and_then(|cfg| {
            let dir = match (out_dir, &cfg.output.dir) {
                (Some(d), _) => d.to_path_buf(),
                (None, Some(d)) => base.join(d),
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "no output directory: pass --out or set [output] dir".into(),
                    ))
                }
            };
            run_simulation(&cfg, base, &dir)
        });
    match result {
        Ok(s) => {
            println!(
                "wrote {} snapshots and {} diagnostics rows to {} ({} steps of {:.3e}, energy drift {:.3e})",
                s.snapshots.len(),
                s.diagnostics_rows,
                s.out_dir.display(),
                s.steps,
                s.dt,
                s.energy_drift
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// `hydroelastic verify`. Prints the report, writes it as JSON to `report`
/// and exits 0 iff every check passed.
pub fn cmd_verify(opts: &VerifyOptions, report: Option<&Path>) -> i32 {
    let result = verify_suite(opts).and_then(|r: VerifyReport| {
        if let Some(p) = report {
            std::fs::write(p, r.to_json() + "\n")?;
        }
        Ok(r)
    });
    match result {
        Ok(r) => {
            println!("{r}");
            if r.passed {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DtnArgs {
    pub eta: PathBuf,
    pub psi: PathBuf,
    pub out: PathBuf,
    pub depth: f64,
    pub nz: usize,
    pub length: f64,
}

/// One application of `G(η)ψ` on files of grid values.
pub fn run_dtn(args: &DtnArgs) -> Result<RealField> {
    let eta = read_vector(&args.eta)?;
    let psi = read_vector(&args.psi)?;
    if eta.len() != psi.len() {
        return Err(Error::InvalidArgument(format!(
            "η has {} values but ψ has {}",
            eta.len(),
            psi.len()
        )));
    }
    let grid = Grid::new(eta.len(), args.length)?;
    let eta = RealField::new(grid.clone(), eta)?;
    let psi = RealField::new(grid, psi)?;
    let opts = StripOptions::default().with_depth(args.depth).with_nz(args.nz);
    let g = DtnOperator::new(&eta, &opts)?.g(&psi)?;
    write_vector(&args.out, g.values())?;
    Ok(g)
}

/// `hydroelastic dtn`.
pub fn cmd_dtn(args: &DtnArgs) -> i32 {
    match run_dtn(args) {
        Ok(g) => {
            println!("wrote {} values to {}", g.len(), args.out.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
