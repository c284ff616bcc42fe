//! Runs a verification battery and prints one line per check.
//!
//!     cargo run --release --example verify_suite -- [suite] [n] [seed]

use hydroelastic::diagnostics::{verify_suite, Suite, VerifyOptions};

fn main() -> hydroelastic::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("all").parse()?;
    let n = args.next().map_or(128, |s| s.parse().expect("n is an integer"));
    let seed = args.next().map_or(42, |s| s.parse().expect("seed is an integer"));
    let report = verify_suite(&VerifyOptions::new(suite, n, seed))?;
    println!("{report}");
    Ok(())
}
