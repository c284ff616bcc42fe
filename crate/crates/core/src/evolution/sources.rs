use num_complex::Complex64;

use super::{unpack, SchrodingerState, SolverConfig};
use crate::dtn::{DtnOperator, DtnResult, InverseMode};
use crate::error::{Error, Result};
use crate::spectral::{abs_d, dx, theta, ComplexField, Grid, Multiplier, RealField};

/// Everything the right-hand sides need at one state `(η, u)`.
#[derive(Clone, Debug)]
pub struct Sources {
    /// `ψ = (Id + G(η))⁻¹u`.
    pub psi: RealField,
    pub dtn: DtnResult,
    pub eta_x: RealField,
    pub psi_x: RealField,
    /// `N(η,u)` from the velocity form, before dealiasing.
    pub n: RealField,
    /// `Q(η,u)`, before dealiasing.
    pub q: RealField,
    pub inverse_iterations: usize,
    pub inverse_residual: f64,
}

impl Sources {
    pub fn grid(&self) -> &Grid {
        self.psi.grid()
    }

    /// `F = q(D_x)Q − iN` with both pieces dealiased.
    pub fn f(&self) -> ComplexField {
        let g = self.grid();
        let cut = cutoff(g);
        let qs = Multiplier::q().sample(g).expect("q is finite");
        let sq = self.q.spectrum();
        let sn = self.n.spectrum();
        let spec = (0..g.n())
            .map(|j| {
                if keep(g, j, cut) {
                    qs.values()[j] * sq[j] - Complex64::i() * sn[j]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        ComplexField::from_spectrum(g, spec)
    }

    /// `N` from the `(ψ_x, Gψ)` form.
    pub fn n_cross(&self) -> RealField {
        nonlinearity_cross(&self.eta_x, &self.psi_x, &self.dtn.g)
    }
}

fn cutoff(g: &Grid) -> usize {
    g.n() / 3
}

fn keep(g: &Grid, j: usize, cut: usize) -> bool {
    let n = g.n();
    let m = if j <= n / 2 { j } else { n - j };
    m <= cut
}

/// Two-thirds rule: zeroes every mode `|m| > n/3`.
pub fn dealias(f: &RealField) -> RealField {
    let g = f.grid();
    let cut = cutoff(g);
    let mut s = f.spectrum();
    for (j, c) in s.iter_mut().enumerate() {
        if !keep(g, j, cut) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    RealField::from_spectrum(g, s)
}

/// `N = BVη_x + (V² − B²)/2`.
pub fn nonlinearity_alt(eta_x: &RealField, b: &RealField, v: &RealField) -> RealField {
    let vals = eta_x
        .values()
        .iter()
        .zip(b.values())
        .zip(v.values())
        .map(|((&e, &bv), &vv)| bv * vv * e + 0.5 * (vv * vv - bv * bv))
        .collect();
    RealField::from_raw(b.grid().clone(), vals)
}

/// `N = ½ψ_x² − ½(η_xψ_x + Gψ)²/(1+η_x²)`.
pub fn nonlinearity_cross(eta_x: &RealField, psi_x: &RealField, g: &RealField) -> RealField {
    let vals = eta_x
        .values()
        .iter()
        .zip(psi_x.values())
        .zip(g.values())
        .map(|((&e, &p), &gv)| {
            let s = e * p + gv;
            0.5 * p * p - 0.5 * s * s / (1.0 + e * e)
        })
        .collect();
    RealField::from_raw(g.grid().clone(), vals)
}

/// `(|D|(1+|D|)⁻¹ − θ(D))u + (1+|D|)⁻¹(Gψ − |D|ψ)`.
fn q_from(u: &RealField, psi: &RealField, gpsi: &RealField) -> RealField {
    let grid = u.grid();
    let nyq = grid.nyquist_index();
    let su = u.spectrum();
    let sr = (gpsi - &abs_d(psi)).spectrum();
    let spec = grid
        .wavenumbers()
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let a = if j == nyq { 0.0 } else { k.abs() };
            (a / (1.0 + a) - theta(a)) * su[j] + sr[j] / (1.0 + a)
        })
        .collect();
    RealField::from_spectrum(grid, spec)
}

fn check_state(eta: &RealField, u: &RealField) -> Result<()> {
    if eta.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    if !u.is_finite() {
        return Err(Error::NonFinite("u"));
    }
    Ok(())
}

fn scale(fields: &[&RealField]) -> f64 {
    fields.iter().map(|f| f.linf_norm().powi(2)).sum::<f64>()
}

/// Solves for `ψ`, `Gψ`, `B`, `V` at `(η, u)` and forms `N` and `Q`.
pub fn evaluate_sources(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<Sources> {
    check_state(eta, u)?;
    solver.validate()?;
    let op = DtnOperator::new(eta, &solver.strip)?;
    let inv = op.invert(u, solver.inverse_mode, solver.inverse_tol, solver.inverse_max_iter)?;
    let eta_x = op.surface().eta_x().clone();
    let psi_x = dx(&inv.psi);
    let n = nonlinearity_alt(&eta_x, &inv.dtn.b, &inv.dtn.v);
    let q = q_from(u, &inv.psi, &inv.dtn.g);
    if !n.is_finite() || !q.is_finite() {
        return Err(Error::NonFinite("nonlinear sources"));
    }
    let out = Sources {
        psi: inv.psi,
        dtn: inv.dtn,
        eta_x,
        psi_x,
        n,
        q,
        inverse_iterations: inv.iterations,
        inverse_residual: inv.residual,
    };
    debug_assert!(
        {
            let d = (&out.n - &out.n_cross()).linf_norm();
            d <= 1e-10 * scale(&[&out.psi_x, &out.dtn.b, &out.dtn.v]) + 1e-300
        },
        "the two forms of N disagree"
    );
    debug_assert!(
        {
            let th = Multiplier::theta().sample(u.grid()).and_then(|m| m.apply_real(u)).unwrap();
            let d = (&(&th + &out.q) - &out.dtn.g).l2_norm();
            d <= 1e-8f64.max(10.0 * solver.inverse_tol) * u.l2_norm() + 1e-300
        },
        "θu + Q differs from G(Id+G)⁻¹u"
    );
    Ok(out)
}

/// `N(η,u)`, with `ψ = (Id + G(η))⁻¹u`.
pub fn nonlinearity_n(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<RealField> {
    Ok(evaluate_sources(eta, u, solver)?.n)
}

/// `Q(η,u)`.
pub fn source_q(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<RealField> {
    Ok(evaluate_sources(eta, u, solver)?.q)
}

/// `F(U) = q(D_x)Q − iN`, dealiased.
pub fn source_f(s: &SchrodingerState, solver: &SolverConfig) -> Result<ComplexField> {
    let st = unpack(s);
    Ok(evaluate_sources(&st.eta, &st.u, solver)?.f())
}

/// `‖θ(D)u + Q(η,u) − G(η)(Id+G(η))⁻¹u‖ / ‖u‖` where the right-hand side
/// uses the other inversion algorithm than `solver`.
pub fn consistency_defect(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<f64> {
    let s = evaluate_sources(eta, u, solver)?;
    let other = match solver.inverse_mode {
        InverseMode::FixedPoint => InverseMode::Cg,
        InverseMode::Cg => InverseMode::FixedPoint,
    };
    let op = DtnOperator::new(eta, &solver.strip)?;
    let inv = op.invert(u, other, solver.inverse_tol, solver.inverse_max_iter)?;
    let th = Multiplier::theta().sample(u.grid())?.apply_real(u)?;
    let denom = u.l2_norm();
    let d = (&(&th + &s.q) - &inv.dtn.g).l2_norm();
    Ok(if denom == 0.0 { d } else { d / denom })
}

/// `‖Q(η, a·u₁ + u₂) − a·Q(η,u₁) − Q(η,u₂)‖` relative to the sum of the
/// norms on the right.
pub fn q_linearity_defect(
    eta: &RealField,
    u1: &RealField,
    u2: &RealField,
    a: f64,
    solver: &SolverConfig,
) -> Result<f64> {
    let q1 = source_q(eta, u1, solver)?;
    let q2 = source_q(eta, u2, solver)?;
    let q12 = source_q(eta, &(&u1.scale(a) + u2), solver)?;
    let d = (&(&q12 - &q1.scale(a)) - &q2).l2_norm();
    let denom = a.abs() * q1.l2_norm() + q2.l2_norm();
    Ok(if denom == 0.0 { d } else { d / denom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{pack, SurfaceState};

    fn solver() -> SolverConfig {
        SolverConfig::default().with_nz(49)
    }

    #[test]
    fn zero_u_gives_zero_sources() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.1 * x.cos());
        let s = evaluate_sources(&eta, &RealField::zeros(&g), &solver()).unwrap();
        assert_eq!(s.n.linf_norm(), 0.0);
        assert_eq!(s.q.linf_norm(), 0.0);
    }

    #[test]
    fn flat_single_mode() {
        let g = Grid::periodic(32).unwrap();
        let k = 3.0;
        let u = RealField::from_fn(&g, |x| (1.0 + k) * (k * x).cos());
        let s = evaluate_sources(&RealField::zeros(&g), &u, &solver()).unwrap();
        let want = RealField::from_fn(&g, |x| -0.5 * k * k * (2.0 * k * x).cos());
        assert!((&s.n - &want).linf_norm() < 1e-12);
        assert!((&s.n_cross() - &want).linf_norm() < 1e-12);
        assert!(s.q.linf_norm() < 1e-12);
    }

    #[test]
    fn flat_constant_u() {
        let g = Grid::periodic(16).unwrap();
        let u = RealField::constant(&g, 0.8);
        let q = source_q(&RealField::zeros(&g), &u, &solver()).unwrap();
        assert!((&q - &u.scale(-0.25)).linf_norm() < 1e-14);
    }

    #[test]
    fn f_combines_pieces() {
        let g = Grid::periodic(32).unwrap();
        let k = 2.0;
        let st = SurfaceState::new(
            RealField::zeros(&g),
            RealField::from_fn(&g, |x| (1.0 + k) * (k * x).cos() + 0.4),
            0.0,
        )
        .unwrap();
        let f = source_f(&pack(&st), &solver()).unwrap();
        let n = RealField::from_fn(&g, |x| -0.5 * k * k * (2.0 * k * x).cos());
        // Q = -0.4/4 on the mean, q(0) = 2.
        let want_re = RealField::constant(&g, 2.0 * -0.1);
        assert!((&f.re() - &want_re).linf_norm() < 1e-12);
        assert!((&f.im() + &n).linf_norm() < 1e-12);
    }

    #[test]
    fn dealias_keeps_low_modes() {
        let g = Grid::periodic(32).unwrap();
        let n = g.n();
        let low = RealField::from_fn(&g, |x| ((n / 3) as f64 * x).cos());
        let high = RealField::from_fn(&g, |x| ((n / 3 + 1) as f64 * x).sin());
        assert!((&dealias(&low) - &low).linf_norm() < 1e-13);
        assert!(dealias(&high).linf_norm() < 1e-13);
    }

    #[test]
    fn consistency_uses_both_inverters() {
        let g = Grid::periodic(64).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.1 * x.cos());
        let u = RealField::from_fn(&g, |x| (2.0 * x).cos());
        assert!(consistency_defect(&eta, &u, &solver()).unwrap() < 1e-8);
    }

    #[test]
    fn q_is_linear_in_u() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.15 * (x.sin()).exp() - 0.1);
        let u1 = RealField::from_fn(&g, |x| (2.0 * x).cos());
        let u2 = RealField::from_fn(&g, |x| 0.3 * x.sin() + 0.1);
        assert!(q_linearity_defect(&eta, &u1, &u2, -1.7, &solver()).unwrap() < 1e-9);
    }
}
