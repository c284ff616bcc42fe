use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hydroelastic::cli::{read_diagnostics, read_snapshot, read_vector, write_vector, Snapshot};
use hydroelastic::spectral::{Grid, RealField};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hydroelastic"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = "
[grid]
n = 32
nz = 17

[time]
t_final = 0.04
dt = 0.01

[init]
kind = mode
wavenumbers = 1
amplitudes = 0.05
u_amplitudes = 0.05

[output]
snapshot_every = 2
diagnostics_every = 1
";

#[test]
fn zero_data_gives_empty_dynamics() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", example("zero.cfg").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = read_diagnostics(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.energy == 0.0 && r.l2_eta == 0.0 && r.l2_u == 0.0));
    let snaps: Vec<_> = std::fs::read_dir(dir.path().join("snapshots")).unwrap().collect();
    assert_eq!(snaps.len(), 6);
    for s in snaps {
        let s = read_snapshot(&s.unwrap().path()).unwrap();
        assert!(s.eta.iter().chain(&s.u).all(|&v| v == 0.0));
    }
}

#[test]
fn golden_run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", example("mode_k2.cfg").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"]["state"], "completed");
    assert_eq!(manifest["steps"], 50);
    assert_eq!(manifest["config"]["grid"]["n"], "64");
    assert_eq!(manifest["config"]["time"]["scheme"], "exp-rk4");
    assert_eq!(manifest["grid_hash"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["code_version"], env!("CARGO_PKG_VERSION"));
    let snaps = manifest["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 6);
    let last = read_snapshot(&dir.path().join(snaps[5].as_str().unwrap())).unwrap();
    assert!((last.t - 0.5).abs() < 1e-12);
    assert_eq!(last.n(), 64);

    let text = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,energy,l2_eta,h2_eta,l2_u,y0_U,linf_eta_xx,dtn_residual");
    let rows = read_diagnostics(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(rows.len(), 11);
    let e0 = rows[0].energy;
    assert!(rows.iter().all(|r| ((r.energy - e0) / e0).abs() < 1e-7));
    // 17 significant digits: one digit, a point and 16 more before the exponent.
    for field in lines.next().unwrap().split(',') {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "{field}");
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["simulate", example("mode_k2.cfg").to_str().unwrap(), "--out", d.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(
        std::fs::read(a.path().join("diagnostics.csv")).unwrap(),
        std::fs::read(b.path().join("diagnostics.csv")).unwrap()
    );
}

#[test]
fn output_dir_comes_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL}dir = results\n"));
    let o = run(&["simulate", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(dir.path().join("results/diagnostics.csv").exists());

    let cfg = write_config(dir.path(), SMALL);
    let o = run(&["simulate", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--out"));
}

#[test]
fn missing_key_exits_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("dt = 0.01\n", ""));
    let o = run(&["simulate", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("run.cfg:6:") && err.contains("`dt`"), "{err}");
}

#[test]
fn malformed_value_exits_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("dt = 0.01", "dt = 0.01\nscheme = euler"));
    let o = run(&["simulate", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("run.cfg:9:"), "{}", stderr(&o));
}

#[test]
fn guard_trip_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL}l2_guard = 1e-3\n"));
    let out = dir.path().join("o");
    let o = run(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("guard"));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"]["exit_code"], 3);
}

#[test]
fn picard_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("dt = 0.01", "dt = 0.01\nscheme = picard\npicard_tol = 1e-300\npicard_max_iter = 2");
    let cfg = write_config(dir.path(), &text);
    let o = run(&["simulate", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("Picard"));
}

#[test]
fn picard_run_records_contraction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("dt = 0.01", "dt = 0.01\nscheme = picard"));
    let out = dir.path().join("o");
    let o = run(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join("picard.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "step,iterations,max_ratio");
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        let ratio: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
        assert!(ratio < 0.5);
    }
}

#[test]
fn restart_from_snapshot_continues_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full");
    let cfg = write_config(dir.path(), SMALL);
    assert_eq!(code(&run(&["simulate", cfg.to_str().unwrap(), "--out", full.to_str().unwrap()])), 0);
    // Snapshot 1 is at t = 0.02; restart from it for the remaining two steps.
    let snap = full.join("snapshots/snap_000001.bin");
    let restart = SMALL
        .replace("t_final = 0.04", "t_final = 0.02")
        .replace(
            "kind = mode\nwavenumbers = 1\namplitudes = 0.05\nu_amplitudes = 0.05",
            &format!("kind = file\npath = {}", snap.display()),
        );
    let cfg2 = dir.path().join("restart.cfg");
    std::fs::write(&cfg2, restart).unwrap();
    let second = dir.path().join("second");
    let o = run(&["simulate", cfg2.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let a = read_snapshot(&full.join("snapshots/snap_000002.bin")).unwrap();
    let b = read_snapshot(&second.join("snapshots/snap_000001.bin")).unwrap();
    // Packing the restart state again costs a few ulps.
    for (x, y) in a.eta.iter().chain(&a.u).zip(b.eta.iter().chain(&b.u)) {
        assert!((x - y).abs() < 1e-14, "{x} vs {y}");
    }
    assert!((b.t - 0.04).abs() < 1e-15);
}

#[test]
fn corrupt_snapshot_is_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("bad.bin");
    let mut bytes = Snapshot {
        t: 0.0,
        eta: vec![0.0; 32],
        u: vec![0.0; 32],
    }
    .encode();
    bytes.truncate(bytes.len() - 8);
    std::fs::write(&snap, bytes).unwrap();
    let text = SMALL.replace(
        "kind = mode\nwavenumbers = 1\namplitudes = 0.05\nu_amplitudes = 0.05",
        "kind = file\npath = bad.bin",
    );
    let cfg = write_config(dir.path(), &text);
    let o = run(&["simulate", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("declares n = 32"), "{}", stderr(&o));
}

#[test]
fn verify_writes_json_and_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["verify", "--suite", "paradiff", "--n", "64", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "paradiff");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_with_zero_tolerance_fails() {
    let o = run(&["verify", "--suite", "paradiff", "--n", "64", "--tol", "0"]);
    assert_eq!(code(&o), 2);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(!out.lines().any(|l| l.starts_with("PASS")));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--suite", "identities", "--n", "64", "--seed", "7"]);
    let b = run(&["verify", "--suite", "identities", "--n", "64", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn flipped_hilbert_fails_verification() {
    let o = run(&["verify", "--suite", "identities", "--n", "64", "--flip-hilbert"]);
    assert_eq!(code(&o), 2);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("FAIL identities.ynorm_hardy_projection"), "{out}");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&run(&["verify", "--suite", "spectral"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["verify", "--n", "100"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

fn grid_file(dir: &Path, name: &str, f: &RealField) -> PathBuf {
    let p = dir.join(name);
    write_vector(&p, f.values()).unwrap();
    p
}

#[test]
fn dtn_of_flat_cosine() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::periodic(64).unwrap();
    let eta = grid_file(dir.path(), "eta.txt", &RealField::zeros(&g));
    let psi = grid_file(dir.path(), "psi.txt", &RealField::from_fn(&g, |x| (3.0 * x).cos()));
    let out = dir.path().join("g.txt");
    let o = run(&[
        "dtn",
        "--eta",
        eta.to_str().unwrap(),
        "--psi",
        psi.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let got = read_vector(&out).unwrap();
    for (v, x) in got.iter().zip(g.points()) {
        assert!((v - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
    }
}

#[test]
fn dtn_of_manufactured_pair() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::periodic(128).unwrap();
    let k = 2.0;
    let eta = RealField::from_fn(&g, |x| 0.1 * x.cos());
    let psi = RealField::from_fn(&g, |x| (k * 0.1 * x.cos()).exp() * (k * x).cos());
    let want = RealField::from_fn(&g, |x| {
        k * (k * 0.1 * x.cos()).exp() * ((k * x).cos() - 0.1 * x.sin() * (k * x).sin())
    });
    let (e, p) = (grid_file(dir.path(), "eta.txt", &eta), grid_file(dir.path(), "psi.txt", &psi));
    let out = dir.path().join("g.txt");
    let o = run(&[
        "dtn",
        "--eta",
        e.to_str().unwrap(),
        "--psi",
        p.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--nz",
        "65",
        "--depth",
        "20",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let got = RealField::new(g, read_vector(&out).unwrap()).unwrap();
    assert!((&got - &want).l2_norm() / want.l2_norm() <= 1e-5);
}

#[test]
fn dtn_rejects_mismatched_files() {
    let dir = tempfile::tempdir().unwrap();
    let eta = dir.path().join("eta.txt");
    let psi = dir.path().join("psi.txt");
    write_vector(&eta, &[0.0; 32]).unwrap();
    write_vector(&psi, &[0.0; 64]).unwrap();
    let o = run(&[
        "dtn",
        "--eta",
        eta.to_str().unwrap(),
        "--psi",
        psi.to_str().unwrap(),
        "--out",
        dir.path().join("g.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("32") && stderr(&o).contains("64"));
}
