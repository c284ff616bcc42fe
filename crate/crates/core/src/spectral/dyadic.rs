//! Littlewood–Paley blocks on the periodic grid.
//!
//! `χ(ξ) = 1` for `|ξ| ≤ 1/2`, `0` for `|ξ| ≥ 1`, `1 − S(2|ξ|−1)` in between,
//! with `S` the quintic smoothstep, and `φ(ξ) = χ(ξ) − χ(2ξ)` is supported in
//! `1/4 ≤ |ξ| ≤ 1`. `Δ_0 = χ(D)`, `Δ_j = φ(2^{-j}D)` and `S_j = χ(2^{-j}D)`, so
//! `Δ_j` lives on `2^{j-2} ≤ |ξ| ≤ 2^j` and `Σ_{j≤J} Δ_j = S_J` exactly.
//!
//! Blocks use the true `|k|` at the Nyquist index.

use num_complex::Complex64;

use super::multiplier::smoothstep;
use super::{ComplexField, Grid, RealField};

pub fn chi(xi: f64) -> f64 {
    1.0 - smoothstep(2.0 * xi.abs() - 1.0)
}

pub fn phi(xi: f64) -> f64 {
    chi(xi) - chi(2.0 * xi)
}

/// Index of the last nonzero block: smallest `J` with `S_J = 1` on every grid
/// wavenumber, i.e. `2^J ≥ 2·k_max`.
pub fn top_block(grid: &Grid) -> usize {
    let kmax = grid.max_wavenumber();
    let mut j = 0;
    while (2.0f64).powi(j as i32) < 2.0 * kmax * (1.0 - 1e-12) {
        j += 1;
    }
    j
}

/// Weight of `Δ_j` at wavenumber `k`.
pub fn block_weight(j: usize, k: f64) -> f64 {
    if j == 0 {
        chi(k)
    } else {
        phi(k / 2f64.powi(j as i32))
    }
}

/// Weight of `S_j` at wavenumber `k`; `S_j = 0` for `j < 0`.
pub fn low_pass_weight(j: i64, k: f64) -> f64 {
    if j < 0 {
        0.0
    } else {
        chi(k / 2f64.powi(j as i32))
    }
}

fn weighted(grid: &Grid, mut spec: Vec<Complex64>, w: impl Fn(f64) -> f64) -> Vec<Complex64> {
    for (c, &k) in spec.iter_mut().zip(grid.wavenumbers()) {
        *c *= w(k);
    }
    spec
}

pub fn dyadic_block(f: &RealField, j: usize) -> RealField {
    let g = f.grid();
    RealField::from_spectrum(g, weighted(g, f.spectrum(), |k| block_weight(j, k)))
}

pub fn low_pass(f: &RealField, j: i64) -> RealField {
    let g = f.grid();
    RealField::from_spectrum(g, weighted(g, f.spectrum(), |k| low_pass_weight(j, k)))
}

pub fn dyadic_block_complex(f: &ComplexField, j: usize) -> ComplexField {
    let g = f.grid();
    ComplexField::from_spectrum(g, weighted(g, f.spectrum(), |k| block_weight(j, k)))
}

/// All blocks `Δ_0 f, …, Δ_J f` from a single forward transform.
pub fn decompose(f: &RealField) -> Vec<RealField> {
    let g = f.grid();
    let spec = f.spectrum();
    (0..=top_block(g))
        .map(|j| RealField::from_spectrum(g, weighted(g, spec.clone(), |k| block_weight(j, k))))
        .collect()
}
