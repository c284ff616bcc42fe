//! Solves `ψ + G(η)ψ = u` with both inversion algorithms.
//!
//!     cargo run --release --example dtn_inverse

use hydroelastic::dtn::{DtnOperator, InverseMode};
use hydroelastic::elliptic::StripOptions;
use hydroelastic::spectral::{Grid, RealField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(128)?;
    let eta = RealField::from_fn(&grid, |x| 0.15 * x.cos() * (0.5 * x.sin()).exp());
    let u = RealField::from_fn(&grid, |x| (2.0 * x).sin() + 0.3 * (5.0 * x).cos() + 0.1);
    let op = DtnOperator::new(&eta, &StripOptions::default())?;

    let mut sols = Vec::new();
    for mode in [InverseMode::FixedPoint, InverseMode::Cg] {
        let inv = op.invert(&u, mode, 1e-12, 200)?;
        println!(
            "{:<12} iterations {:>3}  residual {:.2e}",
            mode.as_str(),
            inv.iterations,
            inv.residual
        );
        sols.push(inv.psi);
    }
    println!("disagreement {:.2e}", (&sols[0] - &sols[1]).l2_norm() / sols[0].l2_norm());
    Ok(())
}
