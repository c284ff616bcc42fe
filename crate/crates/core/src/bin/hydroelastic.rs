use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hydroelastic::cli::{cmd_dtn, cmd_simulate, cmd_verify, DtnArgs, EXIT_USAGE};
use hydroelastic::diagnostics::{Suite, VerifyOptions};

/// Hydroelastic wave simulator and verification suite.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Simulate {
        config: PathBuf,
        /// Output directory (overrides `[output] dir`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks.
    Verify {
        /// dtn, paradiff, identities, evolution or all.
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Multiplier applied to every threshold (larger is more lenient).
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
        #[arg(long, default_value_t = 65)]
        nz: usize,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run with the Hilbert transform negated; the suite should fail.
        #[arg(long, hide = true)]
        flip_hilbert: bool,
    },
    /// Apply the Dirichlet-to-Neumann operator once.
    Dtn {
        /// Surface elevation, one value per grid point.
        #[arg(long)]
        eta: PathBuf,
        /// Dirichlet data, one value per grid point.
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        depth: f64,
        #[arg(long, default_value_t = 65)]
        nz: usize,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        length: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let code = match cli.command {
        Command::Simulate { config, out } => cmd_simulate(&config, out.as_deref()),
        Command::Verify {
            suite,
            n,
            seed,
            tol,
            nz,
            report,
            flip_hilbert,
        } => {
            let opts = VerifyOptions {
                suite,
                n,
                seed,
                tol,
                nz,
                flip_hilbert,
            };
            cmd_verify(&opts, report.as_deref())
        }
        Command::Dtn {
            eta,
            psi,
            out,
            depth,
            nz,
            length,
        } => cmd_dtn(&DtnArgs {
            eta,
            psi,
            out,
            depth,
            nz,
            length,
        }),
    };
    ExitCode::from(code as u8)
}
