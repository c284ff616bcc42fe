//! Checks that the two formulas for the nonlinearity agree and that it is
//! an exact derivative, for a few surfaces of increasing steepness.
//!
//!     cargo run --release --example identities

use hydroelastic::diagnostics::{energy, identities_report};
use hydroelastic::evolution::SolverConfig;
use hydroelastic::spectral::{Grid, RealField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(128)?;
    let solver = SolverConfig::default();
    let u = RealField::from_fn(&grid, |x| 0.1 * (2.0 * x).sin() + 0.05 * (3.0 * x).cos());
    println!(" amp        r1         r2      mean N    |N|_L1 / E");
    for amp in [0.0, 0.02, 0.05, 0.1, 0.2] {
        let eta = RealField::from_fn(&grid, |x| amp * (x.cos() + 0.5 * (2.0 * x).sin()));
        let rep = identities_report(&eta, &u, &solver)?;
        let e = energy(&eta, &u, &solver)?;
        println!(
            "{amp:>4} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.4}",
            rep.r1,
            rep.r2,
            rep.n_mean,
            rep.n_l1 / e
        );
    }
    Ok(())
}
