//! Periodic grids, Fourier multipliers, dyadic blocks and norms.

mod field;
mod grid;

pub mod dyadic;
pub mod multiplier;
pub mod norms;

pub use dyadic::{decompose, dyadic_block, low_pass, top_block};
pub use field::{ComplexField, RealField};
pub use grid::Grid;
pub use multiplier::{
    apply_multiplier, harmonic_extension, p_symbol, q_symbol, theta, Multiplier, SampledMultiplier,
    Spectral,
};
pub use norms::{hdot_half_norm_sq, sobolev_norm, spectral_l2_norm, ys_norm};

/// Spectral derivative `∂_x f`.
pub fn dx(f: &RealField) -> RealField {
    let g = f.grid();
    let nyq = g.nyquist_index();
    let mut s = f.spectrum();
    for (j, (c, &k)) in s.iter_mut().zip(g.wavenumbers()).enumerate() {
        *c *= if j == nyq {
            num_complex::Complex64::new(0.0, 0.0)
        } else {
            num_complex::Complex64::new(0.0, k)
        };
    }
    RealField::from_spectrum(g, s)
}

/// Spectral second derivative `∂_x² f`.
pub fn dxx(f: &RealField) -> RealField {
    let g = f.grid();
    let nyq = g.nyquist_index();
    let mut s = f.spectrum();
    for (j, (c, &k)) in s.iter_mut().zip(g.wavenumbers()).enumerate() {
        *c *= if j == nyq { 0.0 } else { -k * k };
    }
    RealField::from_spectrum(g, s)
}

/// Hilbert transform `H f`.
pub fn hilbert(f: &RealField) -> RealField {
    let g = f.grid();
    let nyq = g.nyquist_index();
    let mut s = f.spectrum();
    for (j, (c, &k)) in s.iter_mut().zip(g.wavenumbers()).enumerate() {
        let m = if j == nyq || k == 0.0 {
            num_complex::Complex64::new(0.0, 0.0)
        } else {
            num_complex::Complex64::new(0.0, -k.signum())
        };
        *c *= m;
    }
    RealField::from_spectrum(g, s)
}

/// `|D_x| f`.
pub fn abs_d(f: &RealField) -> RealField {
    let g = f.grid();
    let nyq = g.nyquist_index();
    let mut s = f.spectrum();
    for (j, (c, &k)) in s.iter_mut().zip(g.wavenumbers()).enumerate() {
        *c *= if j == nyq { 0.0 } else { k.abs() };
    }
    RealField::from_spectrum(g, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(g: &Grid) -> RealField {
        RealField::from_fn(g, |x| (x.cos()).exp() + 0.5 * (3.0 * x).sin())
    }

    #[test]
    fn shortcuts_match_multipliers() {
        let g = Grid::periodic(64).unwrap();
        let f = sample(&g);
        let pairs = [
            (dx(&f), Multiplier::dx()),
            (dxx(&f), Multiplier::dxx()),
            (hilbert(&f), Multiplier::hilbert()),
            (abs_d(&f), Multiplier::abs_d()),
        ];
        for (fast, m) in pairs {
            let slow = apply_multiplier(&f, &m).unwrap();
            assert!((&fast - &slow).linf_norm() < 1e-13, "{}", m.name());
        }
    }

    #[test]
    fn hilbert_squares_to_minus_identity_on_mean_free() {
        let g = Grid::periodic(64).unwrap();
        let f = sample(&g);
        let hh = hilbert(&hilbert(&f));
        let want = -&f.minus_mean();
        assert!((&hh - &want).l2_norm() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn abs_d_is_hilbert_of_derivative() {
        let g = Grid::periodic(64).unwrap();
        let f = sample(&g);
        assert!((&abs_d(&f) - &hilbert(&dx(&f))).linf_norm() < 1e-12);
    }
}
