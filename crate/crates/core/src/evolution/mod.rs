//! Nonlinear evolution in the complex variable `U = q(D_x)η + iu`.
//!
//! `U` solves `∂_tU + ip(D_x)U = F(U)` with `F = q(D_x)Q(η,u) − iN(η,u)`.
//! Three one-step schemes are provided (integrating-factor RK4, Strang
//! splitting and a trapezoid Duhamel/Picard iteration) together with the
//! simulation loop.

mod simulate;
mod sources;
mod stepper;
mod systems;

use crate::dtn::InverseMode;
use crate::elliptic::StripOptions;
use crate::error::{Error, Result};
use crate::spectral::{ComplexField, Multiplier, RealField};

pub use simulate::{simulate, simulate_with, Event, Run, Trajectory};
pub use sources::{
    consistency_defect, dealias, evaluate_sources, nonlinearity_alt, nonlinearity_cross,
    nonlinearity_n, q_linearity_defect, source_f, source_q, Sources,
};
pub use stepper::{step, step_system, PicardTrace, Scheme, StepReport, StepperConfig};
pub use systems::{
    dual_formulation_defect, regularity_ratio, SchrodingerSystem, SurfaceSystem, System,
};

/// Surface elevation `η` and `u = ψ + G(η)ψ` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceState {
    pub eta: RealField,
    pub u: RealField,
    pub t: f64,
}

impl SurfaceState {
    pub fn new(eta: RealField, u: RealField, t: f64) -> Result<Self> {
        if eta.grid() != u.grid() {
            return Err(Error::GridMismatch);
        }
        if !eta.is_finite() || !u.is_finite() {
            return Err(Error::NonFinite("surface state"));
        }
        Ok(Self { eta, u, t })
    }

    pub fn zeros(grid: &crate::spectral::Grid) -> Self {
        Self {
            eta: RealField::zeros(grid),
            u: RealField::zeros(grid),
            t: 0.0,
        }
    }
}

/// `U = q(D_x)η + iu` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchrodingerState {
    pub u: ComplexField,
    pub t: f64,
}

pub fn pack(s: &SurfaceState) -> SchrodingerState {
    let qeta = Multiplier::q()
        .sample(s.eta.grid())
        .and_then(|m| m.apply_real(&s.eta))
        .expect("q is finite and even");
    SchrodingerState {
        u: ComplexField::from_parts(&qeta, &s.u),
        t: s.t,
    }
}

pub fn unpack(s: &SchrodingerState) -> SurfaceState {
    let eta = Multiplier::q_inv()
        .sample(s.u.grid())
        .and_then(|m| m.apply_real(&s.u.re()))
        .expect("1/q is finite and even");
    SurfaceState {
        eta,
        u: s.u.im(),
        t: s.t,
    }
}

/// Settings forwarded to the strip solver and to `(Id + G(η))⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub strip: StripOptions,
    pub inverse_mode: InverseMode,
    /// Relative residual target `‖ψ + Gψ − u‖ ≤ tol‖u‖`.
    pub inverse_tol: f64,
    pub inverse_max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            strip: StripOptions::default(),
            inverse_mode: InverseMode::FixedPoint,
            inverse_tol: 1e-11,
            inverse_max_iter: 200,
        }
    }
}

impl SolverConfig {
    pub fn with_nz(mut self, nz: usize) -> Self {
        self.strip.nz = nz;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inverse_tol > 0.0) || self.inverse_max_iter == 0 {
            return Err(Error::InvalidArgument(
                "inverse tolerance and iteration cap must be positive".into(),
            ));
        }
        if !(self.strip.tol > 0.0) {
            return Err(Error::InvalidArgument("dtn tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn zero_packs_to_zero() {
        let g = Grid::periodic(16).unwrap();
        let s = pack(&SurfaceState::zeros(&g));
        assert_eq!(s.u.linf_norm(), 0.0);
    }

    #[test]
    fn cosine_packs_with_q_of_one() {
        let g = Grid::periodic(32).unwrap();
        let s = SurfaceState::new(RealField::from_fn(&g, f64::cos), RealField::zeros(&g), 0.0).unwrap();
        let p = pack(&s);
        let want = RealField::from_fn(&g, |x| 2.0 * x.cos());
        assert!((&p.u.re() - &want).linf_norm() < 1e-13);
        assert!(p.u.im().linf_norm() == 0.0);
    }

    #[test]
    fn unpack_inverts_pack() {
        let g = Grid::periodic(64).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.3 * (x.sin()).exp() - 0.1 * (7.0 * x).cos());
        let u = RealField::from_fn(&g, |x| (2.0 * x).cos() + 0.2);
        let s = SurfaceState::new(eta, u, 1.5).unwrap();
        let back = unpack(&pack(&s));
        assert!((&back.eta - &s.eta).linf_norm() < 1e-12);
        assert!((&back.u - &s.u).linf_norm() < 1e-12);
        assert_eq!(back.t, 1.5);
    }

    #[test]
    fn mismatched_state_is_rejected() {
        let a = RealField::zeros(&Grid::periodic(16).unwrap());
        let b = RealField::zeros(&Grid::periodic(32).unwrap());
        assert!(matches!(SurfaceState::new(a, b, 0.0), Err(Error::GridMismatch)));
    }
}
