use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::spectral::{abs_d, sobolev_norm, Grid, RealField};

/// Shape of the random inputs of [`commutator_experiment`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorSetup {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Coefficient of mode `m` has size `m^{-decay}`.
    pub decay: f64,
}

impl CommutatorSetup {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            decay: 1.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub n: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

/// `Σ_{m=1}^{bandwidth} m^{-decay}(cos(mx + φ_m))` with random phases. Each
/// function draws from its own ChaCha stream, so mode `m` gets the same phase
/// on every grid.
fn random_phase(grid: &Grid, bandwidth: usize, decay: f64, seed: u64, stream: u64) -> RealField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let phases: Vec<f64> = (0..bandwidth)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let base = grid.min_wavenumber();
    RealField::from_fn(grid, |x| {
        phases
            .iter()
            .enumerate()
            .map(|(i, ph)| {
                let m = (i + 1) as f64;
                m.powf(-decay) * (base * m * x + ph).cos()
            })
            .sum()
    })
}

/// `[|D_x|, A] f = |D_x|(A f) − A |D_x| f`.
pub fn commutator(a: &RealField, f: &RealField) -> RealField {
    &abs_d(&(a * f)) - &(a * &abs_d(f))
}

/// Ratios `‖[|D_x|, A]f‖_{L²} / (‖A‖_{H¹} |f|_{L^∞})` over random pairs.
///
/// Both inputs have bandwidth `n/8`, so their product is resolved exactly.
pub fn commutator_experiment(setup: CommutatorSetup) -> Result<CommutatorReport> {
    let grid = Grid::periodic(setup.n)?;
    let bandwidth = setup.n / 8;
    let ratios: Vec<f64> = (0..setup.trials as u64)
        .map(|t| {
            let a = random_phase(&grid, bandwidth, setup.decay, setup.seed, 2 * t);
            let f = random_phase(&grid, bandwidth, setup.decay, setup.seed, 2 * t + 1);
            commutator(&a, &f).l2_norm() / (sobolev_norm(&a, 1.0) * f.linf_norm())
        })
        .collect();
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let mean_ratio = if ratios.is_empty() {
        0.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    Ok(CommutatorReport {
        n: setup.n,
        ratios,
        max_ratio,
        mean_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_commutator() {
        let g = Grid::periodic(32).unwrap();
        let a = RealField::from_fn(&g, f64::cos);
        let f = RealField::from_fn(&g, |x| (2.0 * x).cos());
        let want = RealField::from_fn(&g, |x| -0.5 * x.cos() + 0.5 * (3.0 * x).cos());
        assert!((&commutator(&a, &f) - &want).linf_norm() < 1e-13);
    }

    #[test]
    fn constant_commutes() {
        let g = Grid::periodic(64).unwrap();
        let a = RealField::constant(&g, 2.0);
        let f = random_phase(&g, 8, 1.0, 3, 0);
        assert!(commutator(&a, &f).linf_norm() < 1e-12);
    }

    #[test]
    fn ratios_are_stable_in_n() {
        let a = commutator_experiment(CommutatorSetup::new(128, 20, 9)).unwrap();
        let b = commutator_experiment(CommutatorSetup::new(256, 20, 9)).unwrap();
        assert!(b.max_ratio <= 1.2 * a.max_ratio);
    }
}
