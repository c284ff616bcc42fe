//! Snapshot, diagnostics and vector file formats.
//!
//! Snapshot layout (all little-endian): the magic bytes `HESW`, the format
//! version as `u32`, `n` as `u64`, `t` as `f64`, then `n` values of `η` and
//! `n` values of `u` as `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::diagnostics::DiagnosticsRow;
use crate::error::{Error, Result};
use crate::evolution::SurfaceState;
use crate::spectral::{Grid, RealField};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"HESW";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8;

/// A decoded snapshot, independent of any grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub eta: Vec<f64>,
    pub u: Vec<f64>,
}

impl Snapshot {
    pub fn from_state(s: &SurfaceState) -> Self {
        Self {
            t: s.t,
            eta: s.eta.values().to_vec(),
            u: s.u.values().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.eta.len()
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * self.n());
        out.extend_from_slice(SNAPSHOT_MAGIC);
        out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n() as u64).to_le_bytes());
        out.extend_from_slice(&self.t.to_le_bytes());
        for v in self.eta.iter().chain(&self.u) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Rejects a wrong magic or version and any payload whose length differs
    /// from the declared `n`.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format(format!("snapshot header truncated ({} bytes)", bytes.len())));
        }
        if &bytes[..4] != SNAPSHOT_MAGIC {
            return Err(Error::Format("not a snapshot (bad magic)".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
        if version != SNAPSHOT_VERSION {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
        let t = f64::from_le_bytes(bytes[16..24].try_into().expect("8 bytes"));
        let payload = &bytes[HEADER_LEN..];
        let expected = n.checked_mul(16).filter(|&e| e == payload.len() as u64);
        if expected.is_none() {
            return Err(Error::Format(format!(
                "snapshot declares n = {n} but carries {} payload bytes",
                payload.len()
            )));
        }
        let n = n as usize;
        let vals: Vec<f64> = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Ok(Self {
            t,
            eta: vals[..n].to_vec(),
            u: vals[n..].to_vec(),
        })
    }

    pub fn into_state(self, grid: &Grid) -> Result<SurfaceState> {
        if self.n() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "snapshot has {} points but the grid has {}",
                self.n(),
                grid.n()
            )));
        }
        SurfaceState::new(
            RealField::new(grid.clone(), self.eta)?,
            RealField::new(grid.clone(), self.u)?,
            self.t,
        )
    }
}

pub fn write_snapshot(path: &Path, s: &SurfaceState) -> Result<()> {
    std::fs::write(path, Snapshot::from_state(s).encode())?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    Snapshot::decode(&std::fs::read(path)?)
}

/// One CSV line, 17 significant digits per value.
pub fn format_row(row: &DiagnosticsRow) -> String {
    row.values().iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",")
}

/// Streams diagnostics rows to a CSV file, flushing after each row so a
/// failed run leaves everything computed so far on disk.
pub struct DiagnosticsWriter {
    out: BufWriter<File>,
}

impl DiagnosticsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{}", DiagnosticsRow::HEADER)?;
        Ok(Self { out })
    }

    pub fn push(&mut self, row: &DiagnosticsRow) -> Result<()> {
        writeln!(self.out, "{}", format_row(row))?;
        self.out.flush()?;
        Ok(())
    }
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(DiagnosticsRow::HEADER) {
        return Err(Error::Format("diagnostics header does not match".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let v: Vec<f64> = line
                .split(',')
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Format(format!("diagnostics row {}: {e}", i + 1)))?;
            if v.len() != 8 {
                return Err(Error::Format(format!("diagnostics row {} has {} columns", i + 1, v.len())));
            }
            Ok(DiagnosticsRow {
                t: v[0],
                energy: v[1],
                l2_eta: v[2],
                h2_eta: v[3],
                l2_u: v[4],
                y0_u: v[5],
                linf_eta_xx: v[6],
                dtn_residual: v[7],
            })
        })
        .collect()
}

/// Whitespace separated values, as read and written by `hydroelastic dtn`.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.split_whitespace()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| Error::Format(format!("{}: bad number `{s}` ({e})", path.display())))
        })
        .collect()
}

pub fn write_vector(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for v in values {
        writeln!(out, "{v:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

/// SHA-256 over `n`, `length`, `depth` and `nz`, hex encoded.
pub fn grid_hash(n: usize, length: f64, depth: f64, nz: usize) -> String {
    let mut h = Sha256::new();
    h.update((n as u64).to_le_bytes());
    h.update(length.to_le_bytes());
    h.update(depth.to_le_bytes());
    h.update((nz as u64).to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
