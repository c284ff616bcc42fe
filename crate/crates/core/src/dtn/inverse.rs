use std::str::FromStr;

use super::{DtnOperator, DtnResult};
use crate::elliptic::StripOptions;
use crate::error::{Error, Result};
use crate::spectral::{Multiplier, RealField, SampledMultiplier};

/// Algorithm used for `(Id + G(η))⁻¹`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InverseMode {
    /// `ψ ← (Id+|D|)⁻¹(u − R(η)ψ)`, a preconditioned Richardson iteration.
    #[default]
    FixedPoint,
    /// Preconditioned conjugate gradients on the self-adjoint `Id + G(η)`.
    Cg,
}

impl FromStr for InverseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-point" => Ok(Self::FixedPoint),
            "cg" => Ok(Self::Cg),
            other => Err(Error::InvalidArgument(format!(
                "unknown inverse mode `{other}` (expected fixed-point or cg)"
            ))),
        }
    }
}

impl InverseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::FixedPoint => "fixed-point",
            Self::Cg => "cg",
        }
    }
}

/// Solution of `ψ + G(η)ψ = u`, with `G(η)ψ`, `B`, `V` at the returned `ψ`.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub psi: RealField,
    pub dtn: DtnResult,
    /// Number of `G(η)` applications.
    pub iterations: usize,
    /// `‖ψ + Gψ − u‖_{L²} / ‖u‖_{L²}`.
    pub residual: f64,
}

fn resolvent(op: &DtnOperator) -> Result<SampledMultiplier> {
    Multiplier::resolvent().sample(op.grid())
}

impl DtnOperator {
    pub fn invert(&self, u: &RealField, mode: InverseMode, tol: f64, max_iter: usize) -> Result<Inversion> {
        if u.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        if !u.is_finite() {
            return Err(Error::NonFinite("right-hand side of the inverse"));
        }
        if !(tol > 0.0) || max_iter == 0 {
            return Err(Error::InvalidArgument("inverse tolerance and iteration cap must be positive".into()));
        }
        match mode {
            InverseMode::FixedPoint => self.invert_fixed_point(u, tol, max_iter),
            InverseMode::Cg => self.invert_cg(u, tol, max_iter),
        }
    }

    fn trivial(&self, u: &RealField) -> Result<Inversion> {
        let dtn = self.apply(u)?;
        Ok(Inversion {
            psi: u.clone(),
            dtn,
            iterations: 1,
            residual: 0.0,
        })
    }

    fn invert_fixed_point(&self, u: &RealField, tol: f64, max_iter: usize) -> Result<Inversion> {
        let unorm = u.l2_norm();
        if unorm == 0.0 {
            return self.trivial(u);
        }
        let res = resolvent(self)?;
        let mut psi = res.apply_real(u)?;
        let mut prev = None;
        let mut rel = f64::INFINITY;
        for it in 1..=max_iter {
            let field = self.strip().solve_from(&psi, prev.as_ref())?;
            let dtn = self.assemble(&psi, &field);
            let r = &(u - &psi) - &dtn.g;
            rel = r.l2_norm() / unorm;
            if !rel.is_finite() {
                break;
            }
            if rel <= tol {
                return Ok(Inversion {
                    psi,
                    dtn,
                    iterations: it,
                    residual: rel,
                });
            }
            psi = &psi + &res.apply_real(&r)?;
            prev = Some(field);
        }
        Err(Error::InverseNotConverged {
            iterations: max_iter,
            residual: rel,
        })
    }

    fn invert_cg(&self, u: &RealField, tol: f64, max_iter: usize) -> Result<Inversion> {
        let unorm = u.l2_norm();
        if unorm == 0.0 {
            return self.trivial(u);
        }
        let res = resolvent(self)?;
        let mut x = res.apply_real(u)?;
        let mut applies = 0;
        let mut rel = f64::INFINITY;
        'restart: while applies < max_iter {
            let dx = self.apply(&x)?;
            applies += 1;
            let mut r = &(u - &x) - &dx.g;
            rel = r.l2_norm() / unorm;
            if rel <= tol {
                return Ok(Inversion {
                    psi: x,
                    dtn: dx,
                    iterations: applies,
                    residual: rel,
                });
            }
            let mut z = res.apply_real(&r)?;
            let mut p = z.clone();
            let mut rz = r.dot(&z);
            while applies < max_iter {
                let ap = &p + &self.g(&p)?;
                applies += 1;
                let pap = p.dot(&ap);
                if !(pap > 0.0) {
                    break 'restart;
                }
                let alpha = rz / pap;
                x = &x + &p.scale(alpha);
                r = &r - &ap.scale(alpha);
                if r.l2_norm() <= tol * unorm {
                    continue 'restart;
                }
                z = res.apply_real(&r)?;
                let rz_new = r.dot(&z);
                p = &z + &p.scale(rz_new / rz);
                rz = rz_new;
            }
        }
        Err(Error::InverseNotConverged {
            iterations: applies,
            residual: rel,
        })
    }
}

/// `(Id + G(η))⁻¹u` by the fixed-point iteration.
pub fn invert_id_plus_dtn(
    eta: &RealField,
    u: &RealField,
    opts: &StripOptions,
    tol: f64,
    max_iter: usize,
) -> Result<Inversion> {
    DtnOperator::new(eta, opts)?.invert(u, InverseMode::FixedPoint, tol, max_iter)
}

/// `(Id + G(η))⁻¹u` by preconditioned conjugate gradients.
pub fn invert_direct(
    eta: &RealField,
    u: &RealField,
    opts: &StripOptions,
    tol: f64,
    max_iter: usize,
) -> Result<Inversion> {
    DtnOperator::new(eta, opts)?.invert(u, InverseMode::Cg, tol, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    fn opts() -> StripOptions {
        StripOptions::default().with_nz(49)
    }

    #[test]
    fn flat_inverse_is_diagonal() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::zeros(&g);
        let k = 3.0;
        let u = RealField::from_fn(&g, |x| (1.0 + k) * (k * x).cos());
        let want = RealField::from_fn(&g, |x| (k * x).cos());
        for mode in [InverseMode::FixedPoint, InverseMode::Cg] {
            let inv = DtnOperator::new(&eta, &opts()).unwrap().invert(&u, mode, 1e-10, 50).unwrap();
            assert!((&inv.psi - &want).linf_norm() < 1e-12, "{mode:?}");
        }
    }

    #[test]
    fn constants_pass_through() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.1 * x.cos());
        let u = RealField::constant(&g, 0.8);
        for mode in [InverseMode::FixedPoint, InverseMode::Cg] {
            let inv = DtnOperator::new(&eta, &opts()).unwrap().invert(&u, mode, 1e-10, 50).unwrap();
            assert!((&inv.psi - &u).linf_norm() < 1e-12, "{mode:?}");
        }
    }

    #[test]
    fn both_modes_meet_the_residual_contract() {
        let g = Grid::periodic(64).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.1 * x.cos());
        let u = RealField::from_fn(&g, |x| (2.0 * x).cos());
        let op = DtnOperator::new(&eta, &opts()).unwrap();
        let a = op.invert(&u, InverseMode::FixedPoint, 1e-10, 100).unwrap();
        let b = op.invert(&u, InverseMode::Cg, 1e-10, 100).unwrap();
        for inv in [&a, &b] {
            let check = &(&inv.psi + &op.g(&inv.psi).unwrap()) - &u;
            assert!(check.l2_norm() <= 1e-9 * u.l2_norm());
        }
        assert!((&a.psi - &b.psi).l2_norm() <= 1e-8 * u.l2_norm());
    }

    #[test]
    fn iteration_cap_is_reported() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.2 * x.cos());
        let u = RealField::from_fn(&g, |x| (2.0 * x).cos());
        let err = DtnOperator::new(&eta, &opts())
            .unwrap()
            .invert(&u, InverseMode::FixedPoint, 1e-14, 2)
            .unwrap_err();
        assert!(matches!(err, Error::InverseNotConverged { iterations: 2, .. }));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [InverseMode::FixedPoint, InverseMode::Cg] {
            assert_eq!(m.as_str().parse::<InverseMode>().unwrap(), m);
        }
        assert!("newton".parse::<InverseMode>().is_err());
    }
}
