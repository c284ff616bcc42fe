//! Energy, norms, conservation drift, the Strichartz-type space-time norm and
//! the verification batteries.

mod verify;

use serde::Serialize;

use crate::dtn::DtnOperator;
use crate::elliptic::depth_quadrature_g_w;
use crate::error::{Error, Result};
use crate::evolution::{pack, SolverConfig, SurfaceState, Trajectory};
use crate::spectral::{abs_d, dx, dxx, hilbert, sobolev_norm, ys_norm, RealField};

pub use verify::{
    fitted, linear_exactness, observed_order, picard_ratio, reference_state, verify_suite, Bound, Check, Suite,
    VerifyOptions, VerifyReport,
};

/// One line of the diagnostics series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub energy: f64,
    pub l2_eta: f64,
    pub h2_eta: f64,
    pub l2_u: f64,
    #[serde(rename = "y0_U")]
    pub y0_u: f64,
    pub linf_eta_xx: f64,
    /// Relative residual `‖ψ + Gψ − u‖/‖u‖` of the inversion behind the energy.
    pub dtn_residual: f64,
}

impl DiagnosticsRow {
    pub const HEADER: &'static str = "t,energy,l2_eta,h2_eta,l2_u,y0_U,linf_eta_xx,dtn_residual";

    pub fn values(&self) -> [f64; 8] {
        [
            self.t,
            self.energy,
            self.l2_eta,
            self.h2_eta,
            self.l2_u,
            self.y0_u,
            self.linf_eta_xx,
            self.dtn_residual,
        ]
    }
}

/// Kinetic part `½⟨u, G(Id+G)⁻¹u⟩` and the inversion residual.
fn kinetic(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<(f64, f64)> {
    if eta.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let op = DtnOperator::new(eta, &solver.strip)?;
    let inv = op.invert(u, solver.inverse_mode, solver.inverse_tol, solver.inverse_max_iter)?;
    let k = 0.5 * u.dot(&inv.dtn.g);
    debug_assert!(k >= -1e-12 * u.dot(u), "negative kinetic energy {k}");
    Ok((k.max(0.0), inv.residual))
}

fn potential(eta: &RealField) -> f64 {
    let exx = dxx(eta);
    0.5 * (exx.dot(&exx) + eta.dot(eta))
}

/// `E = ½∫u·G(η)(Id+G(η))⁻¹u + ½∫((∂_x²η)² + η²)`.
pub fn energy(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<f64> {
    Ok(kinetic(eta, u, solver)?.0 + potential(eta))
}

pub fn diagnostics_row(s: &SurfaceState, solver: &SolverConfig) -> Result<DiagnosticsRow> {
    let (k, residual) = kinetic(&s.eta, &s.u, solver)?;
    Ok(DiagnosticsRow {
        t: s.t,
        energy: k + potential(&s.eta),
        l2_eta: s.eta.l2_norm(),
        h2_eta: sobolev_norm(&s.eta, 2.0),
        l2_u: s.u.l2_norm(),
        y0_u: ys_norm(&pack(s).u, 0.0)?,
        linf_eta_xx: dxx(&s.eta).linf_norm(),
        dtn_residual: residual,
    })
}

/// Residuals of `N = ∂_x g` and `HN = ∂_x w̃ − R(η)g`, where
/// `g = ∫Ψ_xΨ_y dy` and `w̃ = ∫(Ψ_y² − Ψ_x²)/2 dy` over the fluid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentitiesReport {
    /// `‖N − ∂_x g‖ / ‖N‖` (absolute when `N = 0`).
    pub r1: f64,
    /// `‖HN − (∂_x w̃ − R(η)g)‖ / ‖HN‖` (absolute when `HN = 0`).
    pub r2: f64,
    pub n_l1: f64,
    pub hn_l1: f64,
    /// Grid mean of `N`, which vanishes for an exact `x`-derivative.
    pub n_mean: f64,
}

pub fn identities_report(eta: &RealField, u: &RealField, solver: &SolverConfig) -> Result<IdentitiesReport> {
    let s = crate::evolution::evaluate_sources(eta, u, solver)?;
    let op = DtnOperator::new(eta, &solver.strip)?;
    let field = op.solve(&s.psi)?;
    let (g, w) = depth_quadrature_g_w(&field, eta)?;
    let hn = hilbert(&s.n);
    let rg = &op.g(&g)? - &abs_d(&g);
    let rel = |d: f64, base: f64| if base == 0.0 { d } else { d / base };
    Ok(IdentitiesReport {
        r1: rel((&s.n - &dx(&g)).l2_norm(), s.n.l2_norm()),
        r2: rel((&hn - &(&dx(&w) - &rg)).l2_norm(), hn.l2_norm()),
        n_l1: s.n.l1_norm(),
        hn_l1: hn.l1_norm(),
        n_mean: s.n.mean(),
    })
}

/// `(Σ ‖U(t)‖⁴_{Y⁰} Δt)^{1/4}` by the trapezoid rule over snapshots, with
/// `sup_t ‖U(t)‖_{L²}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrichartzReport {
    pub l4_y0: f64,
    pub sup_l2: f64,
}

pub fn strichartz_norm(snapshots: &[SurfaceState]) -> Result<StrichartzReport> {
    if snapshots.len() < 2 {
        return Err(Error::InvalidArgument("need at least two snapshots".into()));
    }
    let mut y4 = Vec::with_capacity(snapshots.len());
    let mut sup_l2: f64 = 0.0;
    for s in snapshots {
        let u = pack(s).u;
        y4.push(ys_norm(&u, 0.0)?.powi(4));
        sup_l2 = sup_l2.max(u.l2_norm());
    }
    let integral: f64 = snapshots
        .windows(2)
        .zip(y4.windows(2))
        .map(|(s, y)| 0.5 * (y[0] + y[1]) * (s[1].t - s[0].t))
        .sum();
    Ok(StrichartzReport {
        l4_y0: integral.powf(0.25),
        sup_l2,
    })
}

/// `max_t |E(t) − E(0)| / E(0)` and the series it is taken over. A zero
/// initial energy gives zero drift.
pub fn conservation_drift(rows: &[DiagnosticsRow]) -> (f64, Vec<f64>) {
    let Some(first) = rows.first() else {
        return (0.0, Vec::new());
    };
    let e0 = first.energy;
    let series: Vec<f64> = rows
        .iter()
        .map(|r| if e0 == 0.0 { 0.0 } else { (r.energy - e0).abs() / e0 })
        .collect();
    (series.iter().cloned().fold(0.0, f64::max), series)
}

/// [`conservation_drift`] of a trajectory's diagnostics.
pub fn trajectory_drift(traj: &Trajectory) -> (f64, Vec<f64>) {
    conservation_drift(&traj.diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn solver() -> SolverConfig {
        SolverConfig::default().with_nz(49)
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let g = Grid::periodic(16).unwrap();
        assert_eq!(energy(&RealField::zeros(&g), &RealField::zeros(&g), &solver()).unwrap(), 0.0);
    }

    #[test]
    fn plate_energy_of_a_cosine() {
        let g = Grid::periodic(32).unwrap();
        let e = energy(&RealField::from_fn(&g, f64::cos), &RealField::zeros(&g), &solver()).unwrap();
        assert!((e - PI).abs() < 1e-12);
    }

    #[test]
    fn flat_kinetic_energy() {
        let g = Grid::periodic(32).unwrap();
        let k = 3.0;
        let u = RealField::from_fn(&g, |x| (1.0 + k) * (k * x).cos());
        let e = energy(&RealField::zeros(&g), &u, &solver()).unwrap();
        assert!((e - k * (1.0 + k) * PI / 2.0).abs() < 1e-11, "{e}");
    }

    #[test]
    fn flat_identities_hold() {
        let g = Grid::periodic(64).unwrap();
        let k = 2.0;
        let u = RealField::from_fn(&g, |x| (1.0 + k) * (k * x).cos());
        let r = identities_report(&RealField::zeros(&g), &u, &solver()).unwrap();
        assert!(r.r1 < 1e-10 && r.r2 < 1e-10, "{r:?}");
        assert!(r.n_mean.abs() < 1e-12);
    }

    #[test]
    fn zero_u_identities_are_zero() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.1 * x.cos());
        let r = identities_report(&eta, &RealField::zeros(&g), &solver()).unwrap();
        assert_eq!((r.r1, r.r2, r.n_l1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn drift_of_constant_series_is_zero() {
        let row = |t: f64, e: f64| DiagnosticsRow {
            t,
            energy: e,
            l2_eta: 0.0,
            h2_eta: 0.0,
            l2_u: 0.0,
            y0_u: 0.0,
            linf_eta_xx: 0.0,
            dtn_residual: 0.0,
        };
        assert_eq!(conservation_drift(&[row(0.0, 2.0), row(1.0, 2.0)]).0, 0.0);
        assert_eq!(conservation_drift(&[row(0.0, 0.0), row(1.0, 0.0)]).0, 0.0);
        let (m, s) = conservation_drift(&[row(0.0, 2.0), row(1.0, 2.2), row(2.0, 1.9)]);
        assert!((m - 0.1).abs() < 1e-12);
        assert_eq!(s.len(), 3);
    }
}
