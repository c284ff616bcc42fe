//! Paraproducts, the Bony decomposition and paradifferential operators with
//! finite-sum symbols `a(x, ξ) = Σ_r c_r(x) m_r(ξ)`.

mod commutator;

use num_complex::Complex64;

use crate::elliptic::Surface;
use crate::error::{Error, Result};
use crate::spectral::dyadic::{block_weight, low_pass_weight, top_block};
use crate::spectral::norms::w_rho_inf_norm;
use crate::spectral::{ComplexField, Grid, Multiplier, RealField};

pub use commutator::{commutator, commutator_experiment, CommutatorReport, CommutatorSetup};

/// Offset `N` in `T_a b = Σ_{j≥N} S_{j−N}a Δ_j b`. With the partition of
/// [`crate::spectral::dyadic`], `N = 3` is the smallest offset for which every
/// summand has its spectrum in the annulus `2^{j−3} < |ξ| < 9·2^{j−3}`.
pub const PARAPRODUCT_OFFSET: usize = 3;

fn filtered(grid: &Grid, spec: &[Complex64], w: impl Fn(f64) -> f64) -> RealField {
    let s: Vec<Complex64> = spec
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, &k)| c * w(k))
        .collect();
    RealField::from_spectrum(grid, s)
}

fn check(a: &RealField, b: &RealField) {
    assert_eq!(a.grid(), b.grid(), "fields live on different grids");
}

/// The individual terms `(j, S_{j−N}a · Δ_j b)` of `T_a b`.
pub fn paraproduct_summands(a: &RealField, b: &RealField) -> Vec<(usize, RealField)> {
    check(a, b);
    let g = a.grid();
    let sa = a.spectrum();
    let sb = b.spectrum();
    let n = PARAPRODUCT_OFFSET;
    (n..=top_block(g))
        .map(|j| {
            let low = filtered(g, &sa, |k| low_pass_weight(j as i64 - n as i64, k));
            let blk = filtered(g, &sb, |k| block_weight(j, k));
            (j, &low * &blk)
        })
        .collect()
}

/// `T_a b = Σ_{j≥N} S_{j−N}a Δ_j b`.
pub fn paraproduct(a: &RealField, b: &RealField) -> RealField {
    paraproduct_summands(a, b)
        .into_iter()
        .fold(RealField::zeros(a.grid()), |acc, (_, t)| &acc + &t)
}

/// `R(a, b) = Σ_{|j−j'|<N} Δ_j a Δ_{j'} b`.
pub fn bony_remainder(a: &RealField, b: &RealField) -> RealField {
    check(a, b);
    let g = a.grid();
    let top = top_block(g);
    let sa = a.spectrum();
    let sb = b.spectrum();
    let ba: Vec<RealField> = (0..=top).map(|j| filtered(g, &sa, |k| block_weight(j, k))).collect();
    let bb: Vec<RealField> = (0..=top).map(|j| filtered(g, &sb, |k| block_weight(j, k))).collect();
    let mut out = RealField::zeros(g);
    for (j, aj) in ba.iter().enumerate() {
        for (jp, bjp) in bb.iter().enumerate() {
            if j.abs_diff(jp) < PARAPRODUCT_OFFSET {
                out = &out + &(aj * bjp);
            }
        }
    }
    out
}

/// `a(x, ξ) = Σ_r c_r(x) m_r(ξ)` with declared order and regularity.
#[derive(Clone, Debug)]
pub struct ParaSymbol {
    terms: Vec<(RealField, Multiplier)>,
    order: f64,
    regularity: f64,
}

impl ParaSymbol {
    pub fn new(terms: Vec<(RealField, Multiplier)>, order: f64, regularity: f64) -> Result<Self> {
        let Some((first, _)) = terms.first() else {
            return Err(Error::InvalidArgument("symbol needs at least one term".into()));
        };
        let grid = first.grid().clone();
        for (c, m) in &terms {
            if c.grid() != &grid {
                return Err(Error::GridMismatch);
            }
            m.sample(&grid)?;
        }
        Ok(Self {
            terms,
            order,
            regularity,
        })
    }

    /// `a(x, ξ) = c(x)`.
    pub fn coefficient(c: &RealField, regularity: f64) -> Self {
        Self {
            terms: vec![(c.clone(), Multiplier::identity())],
            order: 0.0,
            regularity,
        }
    }

    /// `a(x, ξ) = m(ξ)`.
    pub fn multiplier(grid: &Grid, m: Multiplier) -> Self {
        let order = m.order();
        Self {
            terms: vec![(RealField::constant(grid, 1.0), m)],
            order,
            regularity: f64::INFINITY,
        }
    }

    pub fn terms(&self) -> &[(RealField, Multiplier)] {
        &self.terms
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn regularity(&self) -> f64 {
        self.regularity
    }

    pub fn grid(&self) -> &Grid {
        self.terms[0].0.grid()
    }

    /// `a(x_i, ξ)`.
    pub fn eval(&self, i: usize, xi: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, m)| c.values()[i] * m.eval(xi))
            .sum()
    }

    /// `ξ ↦ a(·, ξ)` as a pair of real fields (real and imaginary parts).
    fn slice(&self, xi: f64, deriv: usize) -> (RealField, RealField) {
        let g = self.grid();
        let mut re = RealField::zeros(g);
        let mut im = RealField::zeros(g);
        for (c, m) in &self.terms {
            let d = derivative(m, xi, deriv);
            re = &re + &c.scale(d.re);
            im = &im + &c.scale(d.im);
        }
        (re, im)
    }

    /// `M^m_ρ(a) = sup_{α ≤ ρ+3/2} sup_{|ξ|>1/2} ‖⟨ξ⟩^{−m+α} ∂_ξ^α a(·,ξ)‖_{W^{ρ,∞}}`,
    /// with `ξ` sampled geometrically up to the grid's largest wavenumber and
    /// `ξ`-derivatives taken by central differences.
    pub fn seminorm(&self, m: f64, rho: f64) -> Result<f64> {
        let kmax = self.grid().max_wavenumber();
        let max_alpha = (rho + 1.5).floor() as usize;
        let mut xis = Vec::new();
        let mut xi = 0.5 * 1.0625;
        while xi <= kmax {
            xis.push(xi);
            xis.push(-xi);
            xi *= 1.25;
        }
        let mut best: f64 = 0.0;
        for &xi in &xis {
            let bracket = (1.0 + xi * xi).sqrt();
            for alpha in 0..=max_alpha {
                let (re, im) = self.slice(xi, alpha);
                let w = w_rho_inf_norm(&re, rho)? + w_rho_inf_norm(&im, rho)?;
                best = best.max(bracket.powf(alpha as f64 - m) * w);
            }
        }
        Ok(best)
    }
}

/// `m^{(α)}(ξ)` by the central difference of width `α h`, `h = 10⁻³⟨ξ⟩`.
fn derivative(m: &Multiplier, xi: f64, alpha: usize) -> Complex64 {
    if alpha == 0 {
        return m.eval(xi);
    }
    let h = 1e-3 * (1.0 + xi * xi).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    for k in 0..=alpha {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let at = xi + (alpha as f64 / 2.0 - k as f64) * h;
        acc += m.eval(at) * (sign * binom);
        binom = binom * (alpha - k) as f64 / (k + 1) as f64;
    }
    acc / h.powi(alpha as i32)
}

/// `T_a u = Σ_r T_{c_r}(m_r(D) u)`; every `m_r` must be Hermitian on the grid.
pub fn paradiff_apply(a: &ParaSymbol, u: &RealField) -> Result<RealField> {
    if u.grid() != a.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = RealField::zeros(u.grid());
    for (c, m) in &a.terms {
        let mu = m.sample(u.grid())?.apply_real(u)?;
        out = &out + &paraproduct(c, &mu);
    }
    Ok(out)
}

/// Complex version of [`paradiff_apply`]; `T_c` acts on real and imaginary parts.
pub fn paradiff_apply_complex(a: &ParaSymbol, u: &ComplexField) -> Result<ComplexField> {
    if u.grid() != a.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = ComplexField::zeros(u.grid());
    for (c, m) in &a.terms {
        let mu = m.sample(u.grid())?.apply_complex(u)?;
        let re = paraproduct(c, &mu.re());
        let im = paraproduct(c, &mu.im());
        out = &out + &ComplexField::from_parts(&re, &im);
    }
    Ok(out)
}

/// `a = |ξ|/α + (β/2α) iξ` and `A = |ξ|/α − (β/2α) iξ`.
pub fn factorization_symbols(eta: &RealField) -> (ParaSymbol, ParaSymbol) {
    let s = Surface::new(eta);
    let inv_alpha = s.alpha().map(|a| 1.0 / a);
    let half = s.beta().zip_map(s.alpha(), |b, a| b / (2.0 * a));
    let a = ParaSymbol {
        terms: vec![
            (inv_alpha.clone(), Multiplier::abs_d()),
            (half.clone(), Multiplier::dx()),
        ],
        order: 1.0,
        regularity: 1.0,
    };
    let big_a = ParaSymbol {
        terms: vec![(inv_alpha, Multiplier::abs_d()), (-&half, Multiplier::dx())],
        order: 1.0,
        regularity: 1.0,
    };
    (a, big_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{abs_d, dx};

    fn rough(g: &Grid) -> RealField {
        RealField::from_fn(g, |x| (2.0 * x.sin()).exp() + 0.3 * (17.0 * x).cos() - 0.2 * (40.0 * x).sin())
    }

    #[test]
    fn bony_identity() {
        let g = Grid::periodic(128).unwrap();
        let a = rough(&g);
        let b = RealField::from_fn(&g, |x| (x.cos()).exp() * (5.0 * x).sin() + 0.1 * (33.0 * x).cos());
        let sum = &(&paraproduct(&a, &b) + &paraproduct(&b, &a)) + &bony_remainder(&a, &b);
        let prod = &a * &b;
        assert!((&sum - &prod).l2_norm() <= 1e-12 * prod.l2_norm());
    }

    #[test]
    fn paraproduct_by_one_is_high_pass() {
        let g = Grid::periodic(128).unwrap();
        let b = rough(&g);
        let one = RealField::constant(&g, 1.0);
        let got = paraproduct(&one, &b);
        let low = crate::spectral::low_pass(&b, PARAPRODUCT_OFFSET as i64 - 1);
        assert!((&got - &(&b - &low)).linf_norm() < 1e-13);
    }

    #[test]
    fn paraproduct_against_constant_vanishes() {
        let g = Grid::periodic(64).unwrap();
        let a = rough(&g);
        assert!(paraproduct(&a, &RealField::constant(&g, 3.0)).linf_norm() < 1e-14);
    }

    #[test]
    fn remainder_of_ones_is_one() {
        let g = Grid::periodic(64).unwrap();
        let one = RealField::constant(&g, 1.0);
        assert!((&bony_remainder(&one, &one) - &one).linf_norm() < 1e-14);
    }

    #[test]
    fn remainder_vanishes_for_separated_spectra() {
        let g = Grid::periodic(256).unwrap();
        let a = RealField::from_fn(&g, |x| x.cos() + 0.5 * (2.0 * x).sin());
        let high = 2f64.powi(PARAPRODUCT_OFFSET as i32 + 3);
        let b = RealField::from_fn(&g, |x| (high * x).cos() + (1.5 * high * x).sin());
        assert!(bony_remainder(&a, &b).linf_norm() < 1e-14);
    }

    #[test]
    fn summands_live_in_annuli() {
        let g = Grid::periodic(256).unwrap();
        let a = RealField::from_fn(&g, |x| (x.sin()).exp() + 0.2 * (30.0 * x).cos());
        let b = RealField::from_fn(&g, |x| (x.cos()).exp() * (3.0 * x).cos() + 0.3 * (41.0 * x).sin());
        for (j, t) in paraproduct_summands(&a, &b) {
            let lo = 2f64.powi(j as i32 - 3);
            let hi = 9.0 * lo;
            let spec = t.spectrum();
            let scale = spec.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
            for (c, &k) in spec.iter().zip(g.wavenumbers()) {
                if k.abs() <= lo || k.abs() >= hi {
                    assert!(c.norm() <= 1e-12 * scale, "j={j} k={k}: {}", c.norm());
                }
            }
        }
    }

    #[test]
    fn paradiff_of_fourier_multiplier_on_high_mode() {
        let g = Grid::periodic(256).unwrap();
        let k = 2f64.powi(PARAPRODUCT_OFFSET as i32 + 2);
        let u = RealField::from_fn(&g, |x| (k * x).cos());
        let a = ParaSymbol::multiplier(&g, Multiplier::abs_d());
        let got = paradiff_apply(&a, &u).unwrap();
        assert!((&got - &abs_d(&u)).linf_norm() < 1e-12);
    }

    #[test]
    fn paradiff_of_coefficient_is_paraproduct() {
        let g = Grid::periodic(64).unwrap();
        let c = rough(&g);
        let u = RealField::from_fn(&g, |x| (3.0 * x).sin() + (9.0 * x).cos());
        let got = paradiff_apply(&ParaSymbol::coefficient(&c, 1.0), &u).unwrap();
        assert!((&got - &paraproduct(&c, &u)).linf_norm() < 1e-14);
    }

    #[test]
    fn factorization_identities() {
        let g = Grid::periodic(64).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.2 * x.cos() + 0.1 * (3.0 * x).sin());
        let (a, big_a) = factorization_symbols(&eta);
        let ex = dx(&eta);
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..64 {
            let i = (next() * 64.0) as usize % 64;
            let xi = (next() - 0.5) * 100.0;
            let alpha = 1.0 + ex.values()[i].powi(2);
            let beta = -2.0 * ex.values()[i];
            let av = a.eval(i, xi);
            let bv = big_a.eval(i, xi);
            assert!((av * bv - Complex64::new(xi * xi / alpha, 0.0)).norm() < 1e-12 * (1.0 + xi * xi));
            assert!((av - bv - Complex64::new(0.0, beta / alpha * xi)).norm() < 1e-12 * (1.0 + xi.abs()));
            assert!(av.re >= xi.abs() / (1.0 + ex.linf_norm().powi(2)) - 1e-14);
        }
    }

    #[test]
    fn flat_factorization_is_abs_d() {
        let g = Grid::periodic(32).unwrap();
        let (a, big_a) = factorization_symbols(&RealField::zeros(&g));
        for xi in [-3.0, 0.7, 5.0] {
            assert_eq!(a.eval(4, xi), Complex64::new(f64::abs(xi), 0.0));
            assert_eq!(big_a.eval(4, xi), Complex64::new(f64::abs(xi), 0.0));
        }
    }

    #[test]
    fn seminorm_of_abs_d() {
        let g = Grid::periodic(64).unwrap();
        let s = ParaSymbol::multiplier(&g, Multiplier::abs_d());
        let m = s.seminorm(1.0, 0.0).unwrap();
        // α=0 gives |ξ|/⟨ξ⟩ < 1, α=1 gives ⟨ξ⟩^0 · 1 = 1
        assert!((m - 1.0).abs() < 1e-6, "{m}");
    }
}
