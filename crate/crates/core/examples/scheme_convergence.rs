//! Observed temporal order of each scheme from three halvings of `dt`.
//!
//!     cargo run --release --example scheme_convergence

use hydroelastic::diagnostics::{observed_order, reference_state};
use hydroelastic::evolution::{Scheme, StepperConfig};
use hydroelastic::spectral::Grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(64)?;
    let initial = reference_state(&grid);
    for (scheme, dt) in [(Scheme::ExpRk4, 0.1), (Scheme::Strang, 0.05), (Scheme::Picard, 0.05)] {
        let cfg = StepperConfig { scheme, dt, ..StepperConfig::default() };
        let order = observed_order(&initial, &cfg, 0.4)?;
        println!("{:<8} dt = {dt:<5} observed order {order:.2}", scheme.as_str());
    }
    Ok(())
}
