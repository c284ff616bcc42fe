//! Writes and reads back a snapshot, a diagnostics CSV and a text vector.
//!
//!     cargo run --release --example file_formats

use hydroelastic::cli::{read_diagnostics, read_snapshot, read_vector, write_snapshot, write_vector, DiagnosticsWriter};
use hydroelastic::diagnostics::diagnostics_row;
use hydroelastic::evolution::{SolverConfig, SurfaceState};
use hydroelastic::spectral::{Grid, RealField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("hydroelastic-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let grid = Grid::periodic(32)?;
    let s = SurfaceState::new(
        RealField::from_fn(&grid, |x| 0.1 * x.sin()),
        RealField::from_fn(&grid, |x| 0.1 * (3.0 * x).cos()),
        0.5,
    )?;

    let snap = dir.join("snap_000000.bin");
    write_snapshot(&snap, &s)?;
    let back = read_snapshot(&snap)?.into_state(&grid)?;
    println!(
        "snapshot: {} bytes, round trip exact: {}",
        std::fs::metadata(&snap)?.len(),
        back.eta == s.eta && back.u == s.u && back.t == s.t
    );

    let csv = dir.join("diagnostics.csv");
    let row = diagnostics_row(&s, &SolverConfig::default())?;
    let mut w = DiagnosticsWriter::create(&csv)?;
    w.push(&row)?;
    drop(w);
    print!("{}", std::fs::read_to_string(&csv)?);
    println!("csv round trip exact: {}", read_diagnostics(&csv)?[0] == row);

    let vec = dir.join("eta.txt");
    write_vector(&vec, s.eta.values())?;
    println!("vector round trip exact: {}", read_vector(&vec)? == s.eta.values());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
