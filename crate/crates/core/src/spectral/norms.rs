use super::dyadic::{block_weight, top_block};
use super::multiplier::{Multiplier, Spectral};
use super::{Grid, RealField};
use crate::error::Result;

/// `‖f‖_{Hˢ}² = (L/n²) Σ ⟨k⟩^{2s} |f̂_k|²` with the unnormalized DFT.
pub fn sobolev_norm<F: Spectral>(f: &F, s: f64) -> f64 {
    let g = f.field_grid();
    let scale = g.length() / (g.n() as f64).powi(2);
    let sum: f64 = f
        .field_spectrum()
        .iter()
        .zip(g.wavenumbers())
        .map(|(c, &k)| (1.0 + k * k).powf(s) * c.norm_sqr())
        .sum();
    (scale * sum).sqrt()
}

/// `L²` norm computed on the Fourier side (Parseval).
pub fn spectral_l2_norm<F: Spectral>(f: &F) -> f64 {
    sobolev_norm(f, 0.0)
}

/// `‖u‖_{Yˢ} = sup|⟨D⟩ˢu| + sup|H⟨D⟩ˢu|` over grid points.
pub fn ys_norm<F: Spectral>(f: &F, s: f64) -> Result<f64> {
    let g = f.field_grid();
    let lifted = if s == 0.0 {
        None
    } else {
        Some(f.apply(&Multiplier::bracket(s).sample(g)?)?)
    };
    let base = lifted.as_ref().unwrap_or(f);
    let h = base.apply(&Multiplier::hilbert().sample(g)?)?;
    Ok(base.sup_norm() + h.sup_norm())
}

/// `‖ψ‖_{Ḣ^{1/2}}² = ⟨ψ, |D|ψ⟩`.
pub fn hdot_half_norm_sq(psi: &RealField) -> Result<f64> {
    let d = super::apply_multiplier(psi, &Multiplier::abs_d())?;
    Ok(psi.dot(&d))
}

/// Zygmund-type norm `sup_j 2^{jρ} |Δ_j u|_∞`.
pub fn zygmund_norm(f: &RealField, rho: f64) -> f64 {
    let g: &Grid = f.grid();
    let spec = f.spectrum();
    (0..=top_block(g))
        .map(|j| {
            let mut s = spec.clone();
            for (c, &k) in s.iter_mut().zip(g.wavenumbers()) {
                *c *= block_weight(j, k);
            }
            2f64.powf(j as f64 * rho) * RealField::from_spectrum(g, s).linf_norm()
        })
        .fold(0.0, f64::max)
}

/// `W^{ρ,∞}`: sum of derivative sups for integer `ρ ≥ 0`, Zygmund norm otherwise.
pub fn w_rho_inf_norm(f: &RealField, rho: f64) -> Result<f64> {
    if rho >= 0.0 && rho.fract() == 0.0 {
        let mut total = f.linf_norm();
        let dx = Multiplier::dx().sample(f.grid())?;
        let mut d = f.clone();
        for _ in 0..rho as usize {
            d = dx.apply_real(&d)?;
            total += d.linf_norm();
        }
        Ok(total)
    } else {
        Ok(zygmund_norm(f, rho))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{apply_multiplier, ComplexField};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn reference_norms() {
        let g = Grid::periodic(64).unwrap();
        let c = RealField::from_fn(&g, f64::cos);
        assert!((c.l2_norm().powi(2) - PI).abs() < 1e-13);
        assert!((spectral_l2_norm(&c).powi(2) - PI).abs() < 1e-13);
        assert!((ys_norm(&c, 0.0).unwrap() - 2.0).abs() < 1e-13);
        let c2 = RealField::from_fn(&g, |x| (2.0 * x).cos());
        // <2>^2 = 5, times ∫cos² = π
        assert!((sobolev_norm(&c2, 1.0).powi(2) - 5.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn ys_norm_of_complex_exponential() {
        let g = Grid::periodic(32).unwrap();
        let u = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, 3.0 * x));
        // |e^{3ix}| = 1 and H e^{3ix} = -i e^{3ix}
        assert!((ys_norm(&u, 0.0).unwrap() - 2.0).abs() < 1e-13);
        let want = 2.0 * 10f64.powf(0.5);
        assert!((ys_norm(&u, 1.0).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn hilbert_invariance_of_y0() {
        let g = Grid::periodic(128).unwrap();
        let u = RealField::from_fn(&g, |x| (x.sin() * 2.0).exp() - 1.0 + 0.3 * (5.0 * x).cos());
        let u = u.minus_mean();
        let hu = apply_multiplier(&u, &Multiplier::hilbert()).unwrap();
        let a = ys_norm(&u, 0.0).unwrap();
        let b = ys_norm(&hu, 0.0).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn hdot_half_of_mode() {
        let g = Grid::periodic(32).unwrap();
        let f = RealField::from_fn(&g, |x| (4.0 * x).cos());
        assert!((hdot_half_norm_sq(&f).unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn integer_w_norm_of_cosine() {
        let g = Grid::periodic(32).unwrap();
        let f = RealField::from_fn(&g, |x| (2.0 * x).cos());
        // 1 + 2 + 4
        assert!((w_rho_inf_norm(&f, 2.0).unwrap() - 7.0).abs() < 1e-12);
    }
}
