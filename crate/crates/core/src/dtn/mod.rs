//! Dirichlet-to-Neumann operator `G(η)`, surface velocities, the remainder
//! `R(η) = G(η) − |D_x|`, inverses of `Id + G(η)` and the shape derivative.

mod inverse;
mod probe;

use std::sync::Arc;

use crate::elliptic::{trace_derivatives, Strip, StripField, StripOptions, Surface};
use crate::error::{Error, Result};
use crate::spectral::{abs_d, dx, sobolev_norm, Grid, RealField};

pub use inverse::{invert_direct, invert_id_plus_dtn, InverseMode, Inversion};
pub use probe::{estimate_operator_norm, random_band_limited};

/// `Gψ` together with the boundary velocities `B = ∂_yΨ|_{y=η}` and
/// `V = ∂_xΨ|_{y=η}`.
#[derive(Clone, Debug)]
pub struct DtnResult {
    pub g: RealField,
    pub b: RealField,
    pub v: RealField,
    /// Relative residual of the strip solve.
    pub residual: f64,
    pub iterations: usize,
}

/// `G(η)` for one fixed surface; reuses the coefficient fields across calls.
#[derive(Clone, Debug)]
pub struct DtnOperator {
    strip: Strip,
}

impl DtnOperator {
    pub fn new(eta: &RealField, opts: &StripOptions) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::NonFinite("surface elevation"));
        }
        Ok(Self {
            strip: Strip::new(eta, opts)?,
        })
    }

    pub fn from_surface(surface: Arc<Surface>, opts: &StripOptions) -> Result<Self> {
        Ok(Self {
            strip: Strip::with_surface(surface, opts)?,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.strip.surface().grid()
    }

    pub fn surface(&self) -> &Surface {
        self.strip.surface()
    }

    pub fn eta(&self) -> &RealField {
        self.strip.surface().eta()
    }

    pub fn strip(&self) -> &Strip {
        &self.strip
    }

    /// Solves the strip problem and assembles `Gψ`, `B`, `V`.
    pub fn apply(&self, psi: &RealField) -> Result<DtnResult> {
        let field = self.strip.solve(psi)?;
        Ok(self.assemble(psi, &field))
    }

    /// Strip solution for `ψ` (for depth quadratures).
    pub fn solve(&self, psi: &RealField) -> Result<StripField> {
        self.strip.solve(psi)
    }

    /// `Gψ = (1+η_x²)∂_z v − η_x ∂_x v` at `z = 0`, with its discrete mean removed.
    pub fn assemble(&self, psi: &RealField, field: &StripField) -> DtnResult {
        let surf = self.strip.surface();
        let (vz, _) = trace_derivatives(field);
        let psi_x = dx(psi);
        let ex = surf.eta_x();
        let g = RealField::from_raw(
            self.grid().clone(),
            vz.values()
                .iter()
                .zip(ex.values())
                .zip(psi_x.values())
                .map(|((&z, &e), &p)| (1.0 + e * e) * z - e * p)
                .collect(),
        )
        .minus_mean();
        let (b, v) = velocities(ex, &psi_x, &g);
        DtnResult {
            g,
            b,
            v,
            residual: field.residual(),
            iterations: field.iterations(),
        }
    }

    pub fn g(&self, psi: &RealField) -> Result<RealField> {
        Ok(self.apply(psi)?.g)
    }

    /// `R(η)ψ = G(η)ψ − |D_x|ψ`.
    pub fn remainder(&self, psi: &RealField) -> Result<RealField> {
        Ok(&self.g(psi)? - &abs_d(psi))
    }
}

/// `B = (Gψ + η_xψ_x)/(1+η_x²)`, `V = ψ_x − η_x B`.
pub fn velocities(eta_x: &RealField, psi_x: &RealField, g: &RealField) -> (RealField, RealField) {
    let b = RealField::from_raw(
        g.grid().clone(),
        g.values()
            .iter()
            .zip(eta_x.values())
            .zip(psi_x.values())
            .map(|((&gv, &e), &p)| (gv + e * p) / (1.0 + e * e))
            .collect(),
    );
    let v = RealField::from_raw(
        g.grid().clone(),
        psi_x
            .values()
            .iter()
            .zip(eta_x.values())
            .zip(b.values())
            .map(|((&p, &e), &bv)| p - e * bv)
            .collect(),
    );
    (b, v)
}

fn check_grids(a: &RealField, b: &RealField) -> Result<()> {
    if a.grid() != b.grid() {
        Err(Error::GridMismatch)
    } else {
        Ok(())
    }
}

pub fn dtn_apply(eta: &RealField, psi: &RealField, opts: &StripOptions) -> Result<DtnResult> {
    check_grids(eta, psi)?;
    DtnOperator::new(eta, opts)?.apply(psi)
}

pub fn dtn_remainder(eta: &RealField, psi: &RealField, opts: &StripOptions) -> Result<RealField> {
    check_grids(eta, psi)?;
    DtnOperator::new(eta, opts)?.remainder(psi)
}

/// `dG(η)[δη]ψ = −G(η)(δη B) − ∂_x(δη V)`.
pub fn shape_derivative(
    eta: &RealField,
    deta: &RealField,
    psi: &RealField,
    opts: &StripOptions,
) -> Result<RealField> {
    check_grids(eta, deta)?;
    check_grids(eta, psi)?;
    let op = DtnOperator::new(eta, opts)?;
    let r = op.apply(psi)?;
    let gb = op.g(&(deta * &r.b))?;
    Ok(-&gb - dx(&(deta * &r.v)))
}

/// `‖G(η)B + ∂_x V‖_{L²} / ‖ψ‖_{H¹}`; zero for `ψ = 0`.
pub fn cancellation_check(eta: &RealField, psi: &RealField, opts: &StripOptions) -> Result<f64> {
    check_grids(eta, psi)?;
    let denom = sobolev_norm(psi, 1.0);
    if denom == 0.0 {
        return Ok(0.0);
    }
    let op = DtnOperator::new(eta, opts)?;
    let r = op.apply(psi)?;
    let gb = op.g(&r.b)?;
    Ok((&gb + &dx(&r.v)).l2_norm() / denom)
}
