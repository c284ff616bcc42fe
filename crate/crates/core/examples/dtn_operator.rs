//! Applies the Dirichlet-to-Neumann operator on a flat and on a curved
//! surface.
//!
//!     cargo run --release --example dtn_operator

use hydroelastic::dtn::{cancellation_check, DtnOperator};
use hydroelastic::elliptic::StripOptions;
use hydroelastic::spectral::{Grid, RealField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(64)?;
    let opts = StripOptions::default();

    // Flat bottom at depth h: G(0) cos kx = k tanh(kh) cos kx.
    let flat = DtnOperator::new(&RealField::zeros(&grid), &opts)?;
    for k in [1.0, 3.0, 8.0] {
        let psi = RealField::from_fn(&grid, |x| (k * x).cos());
        let want = RealField::from_fn(&grid, |x| k * (k * opts.depth).tanh() * (k * x).cos());
        let err = (&flat.g(&psi)? - &want).linf_norm();
        println!("flat k = {k}: |G psi - k tanh(kh) psi|_inf = {err:.2e}");
    }

    let eta = RealField::from_fn(&grid, |x| 0.1 * x.cos() + 0.05 * (2.0 * x).sin());
    let op = DtnOperator::new(&eta, &opts)?;
    let a = RealField::from_fn(&grid, |x| (3.0 * x).sin() + 0.2 * x.cos());
    let b = RealField::from_fn(&grid, |x| (2.0 * x).cos());
    let r = op.apply(&a)?;
    println!(
        "curved: strip residual {:.2e} after {} iterations",
        r.residual, r.iterations
    );
    println!("  <a, Gb> - <b, Ga> = {:.2e}", a.dot(&op.g(&b)?) - b.dot(&r.g));
    println!("  <a, Ga>           = {:.6}", a.dot(&r.g));
    println!("  mean of Ga        = {:.2e}", r.g.mean());
    println!("  |GB + V_x| / |a|_H1 = {:.2e}", cancellation_check(&eta, &a, &opts)?);
    Ok(())
}
