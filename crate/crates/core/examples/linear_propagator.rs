//! Without the nonlinearity every scheme reproduces `e^{−itp(D)}` exactly.
//!
//!     cargo run --release --example linear_propagator

use hydroelastic::diagnostics::linear_exactness;
use hydroelastic::evolution::Scheme;
use hydroelastic::spectral::{p_symbol, q_symbol, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("  k        p(k)         q(k)");
    for k in [0.0, 1.0, 2.0, 4.0, 16.0] {
        println!("{k:>3} {:>11.4} {:>12.6}", p_symbol(k), q_symbol(k));
    }
    let grid = Grid::periodic(64)?;
    for scheme in [Scheme::ExpRk4, Scheme::Strang, Scheme::Picard] {
        let err = linear_exactness(&grid, scheme, 0.01, 1000)?;
        println!("{:<8} max error after 1000 steps: {err:.2e}", scheme.as_str());
    }
    Ok(())
}
