//! Measures `‖[|D|, A] f‖ / (‖A‖_{H^{3/2}} ‖f‖_{L²})` on random inputs at
//! growing resolution.
//!
//!     cargo run --release --example commutator

use hydroelastic::paradiff::{commutator_experiment, CommutatorSetup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [64, 128, 256, 512] {
        let r = commutator_experiment(CommutatorSetup::new(n, 20, 7))?;
        println!("n = {n:>4}: max ratio {:.4}, mean {:.4}", r.max_ratio, r.mean_ratio);
    }
    Ok(())
}
