//! Evolves a single-mode wave and reports energy drift and the space-time
//! norms of the trajectory.
//!
//!     cargo run --release --example simulate_mode

use hydroelastic::diagnostics::{strichartz_norm, trajectory_drift};
use hydroelastic::evolution::{simulate, Run, StepperConfig, SurfaceState};
use hydroelastic::spectral::{Grid, RealField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(64)?;
    let initial = SurfaceState::new(
        RealField::from_fn(&grid, |x| 0.05 * (2.0 * x).cos()),
        RealField::from_fn(&grid, |x| 0.02 * (2.0 * x).cos()),
        0.0,
    )?;
    let run = Run {
        initial,
        stepper: StepperConfig { dt: 0.01, ..StepperConfig::default() },
        t_final: 1.0,
        snapshot_every: 10,
        diagnostics_every: 10,
        l2_guard: 1e6,
    };
    let traj = simulate(&run)?;
    println!("{} steps of {}", traj.steps, traj.dt);
    println!("      t         energy        |eta|_L2      |eta_xx|_inf");
    for r in &traj.diagnostics {
        println!("{:>7.3} {:>14.10} {:>13.6e} {:>13.6e}", r.t, r.energy, r.l2_eta, r.linf_eta_xx);
    }
    println!("max relative energy drift {:.2e}", trajectory_drift(&traj).0);
    let s = strichartz_norm(&traj.snapshots)?;
    println!("L4_t Y0 = {:.6e}, sup_t L2 = {:.6e}", s.l4_y0, s.sup_l2);
    Ok(())
}
