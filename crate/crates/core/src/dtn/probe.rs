use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::spectral::{sobolev_norm, Grid, RealField};

/// Highest integer mode of the random probes.
const PROBE_BANDWIDTH: usize = 16;

/// `Σ_{m=1}^{bandwidth} a_m cos(κ_m x) + b_m sin(κ_m x)` with `κ_m = 2πm/L` and
/// coefficients uniform in `[-1, 1]`. The draw order depends only on
/// `bandwidth`, so the same seed gives the same function on every grid that
/// resolves it.
pub fn random_band_limited<R: Rng>(grid: &Grid, bandwidth: usize, rng: &mut R) -> RealField {
    let coeffs: Vec<(f64, f64)> = (0..bandwidth)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let base = grid.min_wavenumber();
    RealField::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(m, (a, b))| {
                let kx = base * (m + 1) as f64 * x;
                a * kx.cos() + b * kx.sin()
            })
            .sum()
    })
}

/// Randomized lower bound for `‖op‖_{H^{s_in} → H^{s_out}}`: the largest
/// ratio `‖op f‖_{H^{s_out}} / ‖f‖_{H^{s_in}}` over `n_samples` band-limited
/// probes. Deterministic in `seed`.
pub fn estimate_operator_norm(
    op: impl Fn(&RealField) -> Result<RealField>,
    grid: &Grid,
    s_in: f64,
    s_out: f64,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bandwidth = PROBE_BANDWIDTH.min(grid.n() / 4);
    let mut best: f64 = 0.0;
    for _ in 0..n_samples {
        let f = random_band_limited(grid, bandwidth, &mut rng);
        let out = op(&f)?;
        best = best.max(sobolev_norm(&out, s_out) / sobolev_norm(&f, s_in));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::abs_d;

    #[test]
    fn identity_has_unit_norm() {
        let g = Grid::periodic(64).unwrap();
        for s in [0.0, 1.0, 2.5] {
            let est = estimate_operator_norm(|f| Ok(f.clone()), &g, s, s, 10, 7).unwrap();
            assert!((est - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn abs_d_from_h1_to_l2_is_contractive() {
        let g = Grid::periodic(64).unwrap();
        let est = estimate_operator_norm(|f| Ok(abs_d(f)), &g, 1.0, 0.0, 20, 3).unwrap();
        assert!(est <= 1.0 && est > 0.9);
    }

    #[test]
    fn probes_agree_across_grids() {
        let a = random_band_limited(&Grid::periodic(64).unwrap(), 8, &mut ChaCha8Rng::seed_from_u64(1));
        let b = random_band_limited(&Grid::periodic(128).unwrap(), 8, &mut ChaCha8Rng::seed_from_u64(1));
        for i in 0..64 {
            assert!((a.values()[i] - b.values()[2 * i]).abs() < 1e-12);
        }
    }
}
