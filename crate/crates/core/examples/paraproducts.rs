//! Dyadic blocks, paraproducts and the Bony decomposition of a product.
//!
//!     cargo run --release --example paraproducts

use hydroelastic::paradiff::{bony_remainder, paraproduct};
use hydroelastic::spectral::{decompose, Grid, RealField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(256)?;
    let a = RealField::from_fn(&grid, |x| (x.sin()).exp());
    let b = RealField::from_fn(&grid, |x| (0..40).map(|m| (m as f64 * x + 0.3 * m as f64).cos() / (1 + m) as f64).sum());

    let blocks = decompose(&b);
    let mut total = RealField::zeros(&grid);
    for (j, blk) in blocks.iter().enumerate() {
        println!("block {j}: |Delta_j b| = {:.4e}", blk.l2_norm());
        total = &total + blk;
    }
    println!("|sum of blocks - b| = {:.2e}", (&total - &b).l2_norm());

    let tab = paraproduct(&a, &b);
    let tba = paraproduct(&b, &a);
    let rem = bony_remainder(&a, &b);
    let prod = &a * &b;
    println!("|T_a b| = {:.4e}  |T_b a| = {:.4e}  |R(a,b)| = {:.4e}", tab.l2_norm(), tba.l2_norm(), rem.l2_norm());
    println!(
        "|ab - T_a b - T_b a - R(a,b)| / |ab| = {:.2e}",
        (&(&(&prod - &tab) - &tba) - &rem).l2_norm() / prod.l2_norm()
    );
    Ok(())
}
