//! Run configuration files.
//!
//! The format is a flat INI dialect: `[section]` headers, `key = value`
//! lines, and comments starting with `#` or `;`. Lists are comma separated.
//! Unknown sections or keys are errors, so a typo never silently falls back
//! to a default.
//!
//! ```text
//! [grid]
//! n = 128              # required, power of two
//! length = 6.283185307179586
//! depth = 20           # strip depth L_z
//! nz = 65              # vertical Chebyshev levels
//!
//! [time]
//! t_final = 1.0        # required
//! dt = 1e-3            # required; shrunk so that t_final is hit exactly
//! scheme = exp-rk4     # exp-rk4 | strang | picard
//! picard_tol = 1e-12
//! picard_max_iter = 30
//!
//! [init]
//! kind = mode          # required: mode | gaussian | file
//! wavenumbers = 1, 2   # mode: integer mode numbers m (wavenumber 2πm/length)
//! amplitudes = 0.05, 0 # mode: cosine amplitudes of η; gaussian: one peak height
//! u_amplitudes = 0, 0.05
//! width = 0.5          # gaussian
//! center = 3.14        # gaussian, defaults to length/2
//! path = start.bin     # file: snapshot, relative to the config file
//!
//! [solver]
//! dtn_tol = 1e-12
//! inverse_mode = fixed-point   # fixed-point | cg
//! inverse_tol = 1e-11
//! inverse_max_iter = 200
//!
//! [output]
//! dir = out            # relative to the config file; --out overrides
//! snapshot_every = 100
//! diagnostics_every = 10
//! l2_guard = 1e6
//! ```
//!
//! A Gaussian is `A·e^{−(x−x₀)²/2w²}` summed over all periodic images and
//! sampled through its Fourier coefficients,
//! `η(x) = (A w √(2π) / L) Σ_{|m| < n/2} e^{−k_m²w²/2} cos(k_m(x − x₀))`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dtn::InverseMode;
use crate::elliptic::StripOptions;
use crate::error::{Error, Result};
use crate::evolution::{Run, Scheme, SolverConfig, StepperConfig, SurfaceState};
use crate::spectral::{Grid, RealField};

use super::io::read_snapshot;

#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
    pub depth: f64,
    pub nz: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeConfig {
    pub t_final: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitConfig {
    Mode {
        wavenumbers: Vec<u32>,
        amplitudes: Vec<f64>,
        u_amplitudes: Vec<f64>,
    },
    Gaussian {
        amplitude: f64,
        u_amplitude: f64,
        width: f64,
        center: Option<f64>,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSection {
    pub dtn_tol: f64,
    pub inverse_mode: InverseMode,
    pub inverse_tol: f64,
    pub inverse_max_iter: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub snapshot_every: usize,
    pub diagnostics_every: usize,
    pub l2_guard: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub init: InitConfig,
    pub solver: SolverSection,
    pub output: OutputConfig,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("grid", &["n", "length", "depth", "nz"]),
    ("time", &["t_final", "dt", "scheme", "picard_tol", "picard_max_iter"]),
    (
        "init",
        &["kind", "wavenumbers", "amplitudes", "u_amplitudes", "width", "center", "path"],
    ),
    ("solver", &["dtn_tol", "inverse_mode", "inverse_tol", "inverse_max_iter"]),
    ("output", &["dir", "snapshot_every", "diagnostics_every", "l2_guard"]),
];

struct Entry {
    value: String,
    line: usize,
}

struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

struct Document {
    sections: BTreeMap<String, Section>,
    last_line: usize,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Document> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split(['#', ';']).next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(err(line, format!("unknown section [{name}]")));
            }
            if sections.contains_key(name) {
                return Err(err(line, format!("section [{name}] appears twice")));
            }
            sections.insert(
                name.to_string(),
                Section {
                    line,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(err(line, format!("expected `key = value`, found `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(sec) = current.as_deref() else {
            return Err(err(line, format!("key `{key}` appears before any section")));
        };
        let allowed = SECTIONS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !allowed.contains(&key) {
            return Err(err(line, format!("unknown key `{key}` in [{sec}]")));
        }
        let entries = &mut sections.get_mut(sec).expect("current section exists").entries;
        if entries.contains_key(key) {
            return Err(err(line, format!("key `{key}` set twice in [{sec}]")));
        }
        entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    Ok(Document { sections, last_line })
}

impl Document {
    fn entry(&self, sec: &str, key: &str) -> Option<&Entry> {
        self.sections.get(sec).and_then(|s| s.entries.get(key))
    }

    fn missing(&self, sec: &str, key: &str) -> Error {
        match self.sections.get(sec) {
            Some(s) => err(s.line, format!("missing required key `{key}` in [{sec}]")),
            None => err(
                self.last_line,
                format!("missing required key `{key}` (no [{sec}] section)"),
            ),
        }
    }

    fn parse<T: FromStr>(&self, sec: &str, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(e) = self.entry(sec, key) else {
            return Ok(None);
        };
        e.value
            .parse::<T>()
            .map(Some)
            .map_err(|x| err(e.line, format!("bad value for `{key}`: `{}` ({x})", e.value)))
    }

    fn require<T: FromStr>(&self, sec: &str, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(sec, key)?.ok_or_else(|| self.missing(sec, key))
    }

    fn list<T: FromStr>(&self, sec: &str, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(e) = self.entry(sec, key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<T>()
                    .map_err(|x| err(e.line, format!("bad entry `{}` in `{key}` ({x})", s.trim())))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn line_of(&self, sec: &str, key: &str) -> usize {
        self.entry(sec, key)
            .map(|e| e.line)
            .or_else(|| self.sections.get(sec).map(|s| s.line))
            .unwrap_or(self.last_line)
    }
}

impl RunConfig {
    /// Parses a configuration. Every error names the offending line.
    pub fn parse(text: &str) -> Result<Self> {
        let d = tokenize(text)?;
        let defaults = StripOptions::default();
        let solver_defaults = SolverConfig::default();
        let stepper_defaults = StepperConfig::default();

        let grid = GridConfig {
            n: d.require("grid", "n")?,
            length: d.parse("grid", "length")?.unwrap_or(std::f64::consts::TAU),
            depth: d.parse("grid", "depth")?.unwrap_or(defaults.depth),
            nz: d.parse("grid", "nz")?.unwrap_or(defaults.nz),
        };
        let time = TimeConfig {
            t_final: d.require("time", "t_final")?,
            dt: d.require("time", "dt")?,
            scheme: d.parse("time", "scheme")?.unwrap_or_default(),
            picard_tol: d.parse("time", "picard_tol")?.unwrap_or(stepper_defaults.picard_tol),
            picard_max_iter: d
                .parse("time", "picard_max_iter")?
                .unwrap_or(stepper_defaults.picard_max_iter),
        };
        let kind: String = d.require("init", "kind")?;
        let used: &[&str] = match kind.as_str() {
            "mode" => &["kind", "wavenumbers", "amplitudes", "u_amplitudes"],
            "gaussian" => &["kind", "amplitudes", "u_amplitudes", "width", "center"],
            "file" => &["kind", "path"],
            other => {
                return Err(err(
                    d.line_of("init", "kind"),
                    format!("unknown init kind `{other}` (expected mode, gaussian or file)"),
                ))
            }
        };
        if let Some(s) = d.sections.get("init") {
            if let Some((k, e)) = s.entries.iter().find(|(k, _)| !used.contains(&k.as_str())) {
                return Err(err(e.line, format!("key `{k}` does not apply to init kind `{kind}`")));
            }
        }
        let init = match kind.as_str() {
            "mode" => {
                let wavenumbers: Vec<u32> = d.list("init", "wavenumbers")?.ok_or_else(|| d.missing("init", "wavenumbers"))?;
                let amplitudes: Vec<f64> = d.list("init", "amplitudes")?.ok_or_else(|| d.missing("init", "amplitudes"))?;
                let u_amplitudes: Vec<f64> = d
                    .list("init", "u_amplitudes")?
                    .unwrap_or_else(|| vec![0.0; wavenumbers.len()]);
                for (key, len) in [("amplitudes", amplitudes.len()), ("u_amplitudes", u_amplitudes.len())] {
                    if len != wavenumbers.len() {
                        return Err(err(
                            d.line_of("init", key),
                            format!("`{key}` has {len} entries but `wavenumbers` has {}", wavenumbers.len()),
                        ));
                    }
                }
                InitConfig::Mode {
                    wavenumbers,
                    amplitudes,
                    u_amplitudes,
                }
            }
            "gaussian" => {
                let single = |key: &str| -> Result<Option<f64>> {
                    match d.list::<f64>("init", key)? {
                        None => Ok(None),
                        Some(v) if v.len() == 1 => Ok(Some(v[0])),
                        Some(v) => Err(err(
                            d.line_of("init", key),
                            format!("a gaussian takes one value for `{key}`, got {}", v.len()),
                        )),
                    }
                };
                InitConfig::Gaussian {
                    amplitude: single("amplitudes")?.ok_or_else(|| d.missing("init", "amplitudes"))?,
                    u_amplitude: single("u_amplitudes")?.unwrap_or(0.0),
                    width: d.require("init", "width")?,
                    center: d.parse("init", "center")?,
                }
            }
            _ => InitConfig::File {
                path: PathBuf::from(d.require::<String>("init", "path")?),
            },
        };
        let solver = SolverSection {
            dtn_tol: d.parse("solver", "dtn_tol")?.unwrap_or(defaults.tol),
            inverse_mode: d.parse("solver", "inverse_mode")?.unwrap_or_default(),
            inverse_tol: d.parse("solver", "inverse_tol")?.unwrap_or(solver_defaults.inverse_tol),
            inverse_max_iter: d
                .parse("solver", "inverse_max_iter")?
                .unwrap_or(solver_defaults.inverse_max_iter),
        };
        let output = OutputConfig {
            dir: d.parse::<String>("output", "dir")?.map(PathBuf::from),
            snapshot_every: d.parse("output", "snapshot_every")?.unwrap_or(100),
            diagnostics_every: d.parse("output", "diagnostics_every")?.unwrap_or(10),
            l2_guard: d.parse("output", "l2_guard")?.unwrap_or(1e6),
        };
        let cfg = RunConfig {
            grid,
            time,
            init,
            solver,
            output,
        };
        cfg.check(&d)?;
        Ok(cfg)
    }

    fn check(&self, d: &Document) -> Result<()> {
        let positive = |ok: bool, sec: &str, key: &str, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(err(d.line_of(sec, key), format!("`{key}` must be {what}")))
            }
        };
        let g = &self.grid;
        positive(g.n >= 8 && g.n.is_power_of_two(), "grid", "n", "a power of two, at least 8")?;
        positive(g.length.is_finite() && g.length > 0.0, "grid", "length", "positive")?;
        positive(g.depth.is_finite() && g.depth > 0.0, "grid", "depth", "positive")?;
        positive(g.nz >= 8, "grid", "nz", "at least 8")?;
        let t = &self.time;
        positive(t.t_final.is_finite() && t.t_final >= 0.0, "time", "t_final", "non-negative")?;
        positive(t.dt.is_finite() && t.dt > 0.0, "time", "dt", "positive")?;
        positive(t.picard_tol > 0.0, "time", "picard_tol", "positive")?;
        positive(t.picard_max_iter >= 1, "time", "picard_max_iter", "at least 1")?;
        match &self.init {
            InitConfig::Mode {
                amplitudes,
                u_amplitudes,
                ..
            } => {
                positive(amplitudes.iter().all(|a| a.is_finite()), "init", "amplitudes", "finite")?;
                positive(u_amplitudes.iter().all(|a| a.is_finite()), "init", "u_amplitudes", "finite")?;
            }
            InitConfig::Gaussian {
                amplitude,
                u_amplitude,
                width,
                center,
            } => {
                positive(amplitude.is_finite() && u_amplitude.is_finite(), "init", "amplitudes", "finite")?;
                positive(width.is_finite() && *width > 0.0, "init", "width", "positive")?;
                positive(center.map_or(true, f64::is_finite), "init", "center", "finite")?;
            }
            InitConfig::File { .. } => {}
        }
        let s = &self.solver;
        positive(s.dtn_tol > 0.0, "solver", "dtn_tol", "positive")?;
        positive(s.inverse_tol > 0.0, "solver", "inverse_tol", "positive")?;
        positive(s.inverse_max_iter >= 1, "solver", "inverse_max_iter", "at least 1")?;
        let o = &self.output;
        positive(o.snapshot_every >= 1, "output", "snapshot_every", "at least 1")?;
        positive(o.diagnostics_every >= 1, "output", "diagnostics_every", "at least 1")?;
        positive(o.l2_guard > 0.0, "output", "l2_guard", "positive")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Normalized `(section, key, value)` triples, defaults filled in. This is
    /// what the manifest echoes and what [`RunConfig::to_ini`] writes.
    pub fn entries(&self) -> Vec<(&'static str, &'static str, String)> {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let g = &self.grid;
        let t = &self.time;
        let s = &self.solver;
        let o = &self.output;
        let mut out = vec![
            ("grid", "n", g.n.to_string()),
            ("grid", "length", format!("{:?}", g.length)),
            ("grid", "depth", format!("{:?}", g.depth)),
            ("grid", "nz", g.nz.to_string()),
            ("time", "t_final", format!("{:?}", t.t_final)),
            ("time", "dt", format!("{:?}", t.dt)),
            ("time", "scheme", t.scheme.to_string()),
            ("time", "picard_tol", format!("{:?}", t.picard_tol)),
            ("time", "picard_max_iter", t.picard_max_iter.to_string()),
        ];
        match &self.init {
            InitConfig::Mode {
                wavenumbers,
                amplitudes,
                u_amplitudes,
            } => {
                out.push(("init", "kind", "mode".into()));
                out.push((
                    "init",
                    "wavenumbers",
                    wavenumbers.iter().map(u32::to_string).collect::<Vec<_>>().join(", "),
                ));
                out.push(("init", "amplitudes", list(amplitudes)));
                out.push(("init", "u_amplitudes", list(u_amplitudes)));
            }
            InitConfig::Gaussian {
                amplitude,
                u_amplitude,
                width,
                center,
            } => {
                out.push(("init", "kind", "gaussian".into()));
                out.push(("init", "amplitudes", format!("{amplitude:?}")));
                out.push(("init", "u_amplitudes", format!("{u_amplitude:?}")));
                out.push(("init", "width", format!("{width:?}")));
                if let Some(c) = center {
                    out.push(("init", "center", format!("{c:?}")));
                }
            }
            InitConfig::File { path } => {
                out.push(("init", "kind", "file".into()));
                out.push(("init", "path", path.display().to_string()));
            }
        }
        out.extend([
            ("solver", "dtn_tol", format!("{:?}", s.dtn_tol)),
            ("solver", "inverse_mode", s.inverse_mode.as_str().to_string()),
            ("solver", "inverse_tol", format!("{:?}", s.inverse_tol)),
            ("solver", "inverse_max_iter", s.inverse_max_iter.to_string()),
        ]);
        if let Some(dir) = &o.dir {
            out.push(("output", "dir", dir.display().to_string()));
        }
        out.extend([
            ("output", "snapshot_every", o.snapshot_every.to_string()),
            ("output", "diagnostics_every", o.diagnostics_every.to_string()),
            ("output", "l2_guard", format!("{:?}", o.l2_guard)),
        ]);
        out
    }

    pub fn to_ini(&self) -> String {
        let mut s = String::new();
        let mut section = "";
        for (sec, key, value) in self.entries() {
            if sec != section {
                if !section.is_empty() {
                    s.push('\n');
                }
                let _ = writeln!(s, "[{sec}]");
                section = sec;
            }
            let _ = writeln!(s, "{key} = {value}");
        }
        s
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n, self.grid.length)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            strip: StripOptions {
                depth: self.grid.depth,
                nz: self.grid.nz,
                tol: self.solver.dtn_tol,
                ..StripOptions::default()
            },
            inverse_mode: self.solver.inverse_mode,
            inverse_tol: self.solver.inverse_tol,
            inverse_max_iter: self.solver.inverse_max_iter,
        }
    }

    pub fn stepper_config(&self) -> StepperConfig {
        StepperConfig {
            scheme: self.time.scheme,
            dt: self.time.dt,
            picard_tol: self.time.picard_tol,
            picard_max_iter: self.time.picard_max_iter,
            solver: self.solver_config(),
            nonlinear: true,
        }
    }

    /// Initial state; `base` resolves a relative snapshot path.
    pub fn initial_state(&self, base: &Path) -> Result<SurfaceState> {
        let grid = self.grid()?;
        let l = self.grid.length;
        match &self.init {
            InitConfig::Mode {
                wavenumbers,
                amplitudes,
                u_amplitudes,
            } => {
                let k0 = grid.min_wavenumber();
                let nyq = (grid.n() / 2) as u32;
                if let Some(m) = wavenumbers.iter().find(|&&m| m >= nyq) {
                    return Err(Error::InvalidArgument(format!(
                        "mode {m} is not resolved on {} points",
                        grid.n()
                    )));
                }
                let sum = |amps: &[f64]| {
                    RealField::from_fn(&grid, |x| {
                        wavenumbers
                            .iter()
                            .zip(amps)
                            .map(|(&m, a)| a * (k0 * m as f64 * x).cos())
                            .sum()
                    })
                };
                SurfaceState::new(sum(amplitudes), sum(u_amplitudes), 0.0)
            }
            InitConfig::Gaussian {
                amplitude,
                u_amplitude,
                width,
                center,
            } => {
                let x0 = center.unwrap_or(0.5 * l);
                let w = *width;
                let c = w * (2.0 * std::f64::consts::PI).sqrt() / l;
                let ks: Vec<f64> = grid
                    .wavenumbers()
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != grid.nyquist_index())
                    .map(|(_, &k)| k)
                    .collect();
                let bump = RealField::from_fn(&grid, |x| {
                    c * ks
                        .iter()
                        .map(|k| (-0.5 * k * k * w * w).exp() * (k * (x - x0)).cos())
                        .sum::<f64>()
                });
                SurfaceState::new(bump.scale(*amplitude), bump.scale(*u_amplitude), 0.0)
            }
            InitConfig::File { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                let snap = read_snapshot(&p)?;
                snap.into_state(&grid)
            }
        }
    }

    pub fn run(&self, base: &Path) -> Result<Run> {
        Ok(Run {
            initial: self.initial_state(base)?,
            stepper: self.stepper_config(),
            t_final: self.time.t_final,
            snapshot_every: self.output.snapshot_every,
            diagnostics_every: self.output.diagnostics_every,
            l2_guard: self.output.l2_guard,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
[grid]
n = 32

[time]
t_final = 0.1
dt = 0.01

[init]
kind = mode
wavenumbers = 1, 2
amplitudes = 0.05, 0
u_amplitudes = 0, 0.05
";

    fn line_of(e: Error) -> usize {
        match e {
            Error::Config { line, .. } => line,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.grid.n, 32);
        assert_eq!(c.grid.nz, 65);
        assert_eq!(c.time.scheme, Scheme::ExpRk4);
        assert_eq!(c.output.snapshot_every, 100);
        assert!(matches!(c.init, InitConfig::Mode { ref wavenumbers, .. } if wavenumbers == &[1, 2]));
    }

    #[test]
    fn normalized_text_parses_back() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(RunConfig::parse(&c.to_ini()).unwrap(), c);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = MINIMAL.replace("dt = 0.01", "dt = fast");
        assert_eq!(line_of(RunConfig::parse(&bad).unwrap_err()), 7);
        let bad = MINIMAL.replace("n = 32", "n = 32\nflavour = 3");
        assert_eq!(line_of(RunConfig::parse(&bad).unwrap_err()), 4);
        let bad = MINIMAL.replace("amplitudes = 0.05, 0\n", "amplitudes = 0.05\n");
        assert_eq!(line_of(RunConfig::parse(&bad).unwrap_err()), 12);
        let bad = MINIMAL.replace("n = 32", "n = 31");
        assert_eq!(line_of(RunConfig::parse(&bad).unwrap_err()), 3);
    }

    #[test]
    fn missing_key_points_at_its_section() {
        let bad = MINIMAL.replace("t_final = 0.1\n", "");
        assert_eq!(line_of(RunConfig::parse(&bad).unwrap_err()), 5);
        let bad = MINIMAL.replace("[init]\nkind = mode\n", "[init]\n");
        assert!(RunConfig::parse(&bad).is_err());
    }

    #[test]
    fn structural_errors() {
        assert_eq!(line_of(RunConfig::parse("n = 3").unwrap_err()), 1);
        assert_eq!(line_of(RunConfig::parse("[grid\nn = 3").unwrap_err()), 1);
        assert_eq!(line_of(RunConfig::parse("[mesh]").unwrap_err()), 1);
        assert_eq!(line_of(RunConfig::parse("[grid]\nn 4").unwrap_err()), 2);
        let twice = MINIMAL.replace("n = 32", "n = 32\nn = 64");
        assert_eq!(line_of(RunConfig::parse(&twice).unwrap_err()), 4);
        let wrong_kind = MINIMAL.replace("kind = mode", "kind = mode\nwidth = 1");
        assert!(RunConfig::parse(&wrong_kind).is_err());
    }

    #[test]
    fn mode_initial_data() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        let s = c.initial_state(Path::new(".")).unwrap();
        let g = c.grid().unwrap();
        let want = RealField::from_fn(&g, |x| 0.05 * x.cos());
        assert!((&s.eta - &want).linf_norm() < 1e-15);
        let want = RealField::from_fn(&g, |x| 0.05 * (2.0 * x).cos());
        assert!((&s.u - &want).linf_norm() < 1e-15);
    }

    #[test]
    fn gaussian_matches_periodized_bump() {
        let text = MINIMAL
            .replace("n = 32", "n = 128")
            .replace(
                "wavenumbers = 1, 2\namplitudes = 0.05, 0\nu_amplitudes = 0, 0.05",
                "amplitudes = 0.2\nwidth = 0.4",
            )
            .replace("kind = mode", "kind = gaussian");
        let c = RunConfig::parse(&text).unwrap();
        let s = c.initial_state(Path::new(".")).unwrap();
        let l = c.grid.length;
        let want = RealField::from_fn(&c.grid().unwrap(), |x| {
            (-3..=3)
                .map(|j| {
                    let d = x - 0.5 * l + j as f64 * l;
                    0.2 * (-d * d / (2.0 * 0.16)).exp()
                })
                .sum()
        });
        assert!((&s.eta - &want).linf_norm() < 1e-12);
        assert_eq!(s.u.linf_norm(), 0.0);
    }

    #[test]
    fn unresolved_mode_is_rejected() {
        let c = RunConfig::parse(&MINIMAL.replace("1, 2", "1, 16")).unwrap();
        assert!(c.initial_state(Path::new(".")).is_err());
    }
}
