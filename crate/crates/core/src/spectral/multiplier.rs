//! Fourier multipliers `m(D_x)` acting on grid fields.
//!
//! The Nyquist mode has no sign, so every multiplier evaluates its symbol
//! there at `ξ = 0`. Odd symbols (derivatives, Hilbert) therefore annihilate
//! it, and functions of `|D_x|` stay consistent with `|D_x|` itself.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{ComplexField, Grid, RealField};
use crate::error::{Error, Result};

/// Quintic smoothstep `6t⁵ − 15t⁴ + 10t³` clamped to `[0, 1]`.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    }
}

/// Low-frequency cutoff: `1/4` on `|ξ| ≤ 1/2`, `|ξ|/(1+|ξ|)` on `|ξ| > 1`,
/// smoothstep blend in between.
pub fn theta(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 0.5 {
        0.25
    } else if a > 1.0 {
        a / (1.0 + a)
    } else {
        0.25 + (a / (1.0 + a) - 0.25) * smoothstep(2.0 * a - 1.0)
    }
}

/// Dispersion relation of the linear flow, `θ^{1/2}(1+ξ⁴)^{1/2}`.
pub fn p_symbol(xi: f64) -> f64 {
    (theta(xi) * (1.0 + xi.powi(4))).sqrt()
}

/// Packing symbol `θ^{-1/2}(1+ξ⁴)^{1/2}`.
pub fn q_symbol(xi: f64) -> f64 {
    ((1.0 + xi.powi(4)) / theta(xi)).sqrt()
}

type Rule = dyn Fn(f64) -> Complex64 + Send + Sync;

/// A symbol `ξ ↦ m(ξ)` with a name and a nominal order.
#[derive(Clone)]
pub struct Multiplier {
    name: Cow<'static, str>,
    order: f64,
    rule: Arc<Rule>,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl Multiplier {
    pub fn new(
        name: impl Into<Cow<'static, str>>,
        order: f64,
        rule: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            order,
            rule: Arc::new(rule),
        }
    }

    pub fn real(
        name: impl Into<Cow<'static, str>>,
        order: f64,
        rule: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, order, move |xi| Complex64::new(rule(xi), 0.0))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> Complex64 {
        (self.rule)(xi)
    }

    pub fn identity() -> Self {
        Self::real("id", 0.0, |_| 1.0)
    }

    pub fn abs_d() -> Self {
        Self::real("|D|", 1.0, f64::abs)
    }

    pub fn dx() -> Self {
        Self::new("d/dx", 1.0, |xi| Complex64::new(0.0, xi))
    }

    pub fn dxx() -> Self {
        Self::real("d2/dx2", 2.0, |xi| -xi * xi)
    }

    /// `−i sgn ξ` with `sgn 0 = 0`.
    pub fn hilbert() -> Self {
        Self::new("H", 0.0, |xi| {
            if xi > 0.0 {
                Complex64::new(0.0, -1.0)
            } else if xi < 0.0 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `⟨ξ⟩^s = (1+ξ²)^{s/2}`.
    pub fn bracket(s: f64) -> Self {
        Self::real(format!("<D>^{s}"), s, move |xi| (1.0 + xi * xi).powf(0.5 * s))
    }

    pub fn theta() -> Self {
        Self::real("theta", 0.0, theta)
    }

    pub fn p() -> Self {
        Self::real("p", 2.0, p_symbol)
    }

    pub fn q() -> Self {
        Self::real("q", 2.0, q_symbol)
    }

    pub fn q_inv() -> Self {
        Self::real("1/q", -2.0, |xi| 1.0 / q_symbol(xi))
    }

    /// `(1+|ξ|)^{-1}`.
    pub fn resolvent() -> Self {
        Self::real("(1+|D|)^-1", -1.0, |xi| 1.0 / (1.0 + xi.abs()))
    }

    /// `|ξ|(1+|ξ|)^{-1}`.
    pub fn abs_d_resolvent() -> Self {
        Self::real("|D|(1+|D|)^-1", 0.0, |xi| xi.abs() / (1.0 + xi.abs()))
    }

    /// `1 + ξ⁴`.
    pub fn plate() -> Self {
        Self::real("1+D^4", 4.0, |xi| 1.0 + xi.powi(4))
    }

    /// `e^{z|ξ|}` for `z ≤ 0`.
    pub fn harmonic(z: f64) -> Result<Self> {
        if !(z <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "harmonic extension needs z <= 0, got {z}"
            )));
        }
        Ok(Self::real("exp(z|D|)", f64::NEG_INFINITY, move |xi| {
            (z * xi.abs()).exp()
        }))
    }

    /// Linear propagator `e^{−i t p(ξ)}`.
    pub fn propagator(t: f64) -> Self {
        Self::new("exp(-itp)", 0.0, move |xi| {
            Complex64::from_polar(1.0, -t * p_symbol(xi))
        })
    }

    /// Samples the symbol on the grid in FFT order.
    pub fn sample(&self, grid: &Grid) -> Result<SampledMultiplier> {
        let nyq = grid.nyquist_index();
        let mut values = Vec::with_capacity(grid.n());
        for (j, &k) in grid.wavenumbers().iter().enumerate() {
            let xi = if j == nyq { 0.0 } else { k };
            let m = self.eval(xi);
            if !(m.re.is_finite() && m.im.is_finite()) {
                return Err(Error::NonFiniteSymbol {
                    name: self.name.to_string(),
                    wavenumber: k,
                });
            }
            values.push(m);
        }
        let n = grid.n();
        let hermitian = (0..n).all(|j| {
            let a = values[j];
            let b = values[(n - j) % n].conj();
            (a - b).norm() <= 1e-14 * (1.0 + a.norm())
        });
        Ok(SampledMultiplier {
            name: self.name.clone(),
            grid: grid.clone(),
            values,
            hermitian,
        })
    }
}

/// A multiplier evaluated at the wavenumbers of one grid.
#[derive(Clone, Debug)]
pub struct SampledMultiplier {
    name: Cow<'static, str>,
    grid: Grid,
    values: Vec<Complex64>,
    hermitian: bool,
}

impl SampledMultiplier {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Multiplies a spectrum in place.
    pub fn apply_spectrum(&self, spectrum: &mut [Complex64]) {
        for (c, m) in spectrum.iter_mut().zip(&self.values) {
            *c *= m;
        }
    }

    pub fn apply_real(&self, f: &RealField) -> Result<RealField> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        if !self.hermitian {
            return Err(Error::NonHermitianSymbol(self.name.to_string()));
        }
        let mut s = f.spectrum();
        self.apply_spectrum(&mut s);
        Ok(RealField::from_spectrum(&self.grid, s))
    }

    pub fn apply_complex(&self, f: &ComplexField) -> Result<ComplexField> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let mut s = f.spectrum();
        self.apply_spectrum(&mut s);
        Ok(ComplexField::from_spectrum(&self.grid, s))
    }
}

/// Fields a multiplier can act on.
pub trait Spectral: Sized {
    fn apply(&self, m: &SampledMultiplier) -> Result<Self>;
    fn field_grid(&self) -> &Grid;
    fn field_spectrum(&self) -> Vec<Complex64>;
    fn sup_norm(&self) -> f64;
}

impl Spectral for RealField {
    fn apply(&self, m: &SampledMultiplier) -> Result<Self> {
        m.apply_real(self)
    }
    fn field_grid(&self) -> &Grid {
        self.grid()
    }
    fn field_spectrum(&self) -> Vec<Complex64> {
        self.spectrum()
    }
    fn sup_norm(&self) -> f64 {
        self.linf_norm()
    }
}

impl Spectral for ComplexField {
    fn apply(&self, m: &SampledMultiplier) -> Result<Self> {
        m.apply_complex(self)
    }
    fn field_grid(&self) -> &Grid {
        self.grid()
    }
    fn field_spectrum(&self) -> Vec<Complex64> {
        self.spectrum()
    }
    fn sup_norm(&self) -> f64 {
        self.linf_norm()
    }
}

/// `m(D_x) f`: inverse DFT of `m(k_j) f̂(k_j)`.
pub fn apply_multiplier<F: Spectral>(f: &F, m: &Multiplier) -> Result<F> {
    f.apply(&m.sample(f.field_grid())?)
}

/// `e^{z|D_x|} ψ`, the decaying harmonic extension of `ψ` evaluated at depth `z`.
pub fn harmonic_extension(psi: &RealField, z: f64) -> Result<RealField> {
    apply_multiplier(psi, &Multiplier::harmonic(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::periodic(64).unwrap()
    }

    fn max_diff(a: &RealField, b: &RealField) -> f64 {
        (a - b).linf_norm()
    }

    #[test]
    fn theta_reference_values() {
        assert_eq!(theta(0.0), 0.25);
        assert_eq!(theta(0.4), 0.25);
        assert_eq!(theta(0.5), 0.25);
        assert!((theta(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((theta(1.0) - 0.5).abs() < 1e-15);
        for i in 0..2000 {
            let xi = -10.0 + i as f64 * 0.01;
            let t = theta(xi);
            assert!((0.25..1.0).contains(&t));
            assert_eq!(t, theta(-xi));
        }
    }

    #[test]
    fn p_and_q_reference_values() {
        assert_eq!(p_symbol(0.0), 0.5);
        assert_eq!(q_symbol(0.0), 2.0);
        // independent scalar evaluation: sqrt((2/3) * 17)
        let expected = ((2.0f64 / 3.0) * 17.0).sqrt();
        assert!((p_symbol(2.0) - expected).abs() < 1e-14);
        assert!((expected - 3.366502).abs() < 1e-6);
        assert!((q_symbol(1.0) - 2.0).abs() < 1e-14);
        for i in 0..500 {
            let xi = i as f64 * 0.037;
            let pq = p_symbol(xi) * q_symbol(xi);
            assert!((pq - (1.0 + xi.powi(4))).abs() <= 1e-12 * (1.0 + xi.powi(4)));
        }
    }

    #[test]
    fn abs_d_on_cosine() {
        let g = grid();
        let f = RealField::from_fn(&g, |x| (3.0 * x).cos());
        let out = apply_multiplier(&f, &Multiplier::abs_d()).unwrap();
        let want = f.scale(3.0);
        assert!(max_diff(&out, &want) < 1e-13);
    }

    #[test]
    fn hilbert_maps_cos_to_sin() {
        let g = grid();
        for k in 1..6 {
            let kf = k as f64;
            let f = RealField::from_fn(&g, |x| (kf * x).cos());
            let out = apply_multiplier(&f, &Multiplier::hilbert()).unwrap();
            let want = RealField::from_fn(&g, |x| (kf * x).sin());
            assert!(max_diff(&out, &want) < 1e-13);
        }
    }

    #[test]
    fn harmonic_extension_examples() {
        let g = grid();
        let psi = RealField::from_fn(&g, f64::cos);
        let out = harmonic_extension(&psi, -1.0).unwrap();
        assert!(max_diff(&out, &psi.scale((-1.0f64).exp())) < 1e-14);

        let one = RealField::constant(&g, 1.0);
        let out = harmonic_extension(&one, -5.0).unwrap();
        assert!(max_diff(&out, &one) < 1e-14);

        let psi = RealField::from_fn(&g, |x| x.cos() + (4.0 * x).cos());
        let out = harmonic_extension(&psi, -0.5).unwrap();
        let want = RealField::from_fn(&g, |x| {
            (-0.5f64).exp() * x.cos() + (-2.0f64).exp() * (4.0 * x).cos()
        });
        assert!(max_diff(&out, &want) < 1e-14);

        assert!(harmonic_extension(&psi, 0.1).is_err());
    }

    #[test]
    fn non_finite_symbol_rejected() {
        let g = grid();
        let f = RealField::from_fn(&g, f64::cos);
        let bad = Multiplier::real("1/|xi|", -1.0, |xi| 1.0 / xi.abs());
        assert!(matches!(
            apply_multiplier(&f, &bad),
            Err(Error::NonFiniteSymbol { .. })
        ));
    }

    #[test]
    fn non_hermitian_symbol_rejected_on_real_field() {
        let g = grid();
        let f = RealField::from_fn(&g, f64::cos);
        let bad = Multiplier::new("1_{xi>0}", 0.0, |xi| {
            Complex64::new(if xi > 0.0 { 1.0 } else { 0.0 }, 0.0)
        });
        assert!(matches!(
            apply_multiplier(&f, &bad),
            Err(Error::NonHermitianSymbol(_))
        ));
        assert!(apply_multiplier(&f.to_complex(), &bad).is_ok());
    }

    #[test]
    fn multipliers_are_linear() {
        let g = grid();
        let a = RealField::from_fn(&g, |x| (2.0 * x).sin() + 0.1);
        let b = RealField::from_fn(&g, |x| (5.0 * x).cos());
        let m = Multiplier::q();
        let lhs = apply_multiplier(&(&a.scale(2.0) + &b), &m).unwrap();
        let rhs = &apply_multiplier(&a, &m).unwrap().scale(2.0) + &apply_multiplier(&b, &m).unwrap();
        assert!(max_diff(&lhs, &rhs) < 1e-11);
    }
}
