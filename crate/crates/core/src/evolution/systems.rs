use num_complex::Complex64;

use super::sources::{dealias, evaluate_sources};
use super::stepper::{step_system, StepperConfig};
use super::{pack, unpack, SchrodingerState, SolverConfig, SurfaceState};
use crate::error::Result;
use crate::spectral::norms::w_rho_inf_norm;
use crate::spectral::{ys_norm, ComplexField, Grid, Multiplier, RealField, SampledMultiplier};

/// A semilinear system `∂_t X = L X + S(X)` whose linear flow `e^{tL}` is
/// known exactly. The steppers only see this interface.
pub trait System {
    type State: Clone;

    /// `e^{hL} X`.
    fn flow(&self, x: &Self::State, h: f64) -> Self::State;
    /// `S(X)`.
    fn source(&self, x: &Self::State) -> Result<Self::State>;
    /// `y + a·x`.
    fn axpy(&self, y: &Self::State, a: f64, x: &Self::State) -> Self::State;
    fn norm(&self, x: &Self::State) -> f64;

    fn distance(&self, x: &Self::State, y: &Self::State) -> f64 {
        self.norm(&self.axpy(x, -1.0, y))
    }
}

fn sampled(m: Multiplier, grid: &Grid) -> SampledMultiplier {
    m.sample(grid).expect("symbols of the linear flow are finite")
}

fn real_symbol(m: &SampledMultiplier) -> Vec<f64> {
    m.values().iter().map(|c| c.re).collect()
}

/// `∂_tU = −ip(D_x)U + F(U)` in the packed variable.
#[derive(Clone, Debug)]
pub struct SchrodingerSystem {
    grid: Grid,
    p: Vec<f64>,
    solver: SolverConfig,
    nonlinear: bool,
}

impl SchrodingerSystem {
    pub fn new(grid: &Grid, solver: SolverConfig, nonlinear: bool) -> Self {
        Self {
            grid: grid.clone(),
            p: real_symbol(&sampled(Multiplier::p(), grid)),
            solver,
            nonlinear,
        }
    }
}

impl System for SchrodingerSystem {
    type State = ComplexField;

    fn flow(&self, x: &ComplexField, h: f64) -> ComplexField {
        let mut s = x.spectrum();
        for (c, &p) in s.iter_mut().zip(&self.p) {
            *c *= Complex64::from_polar(1.0, -h * p);
        }
        ComplexField::from_spectrum(&self.grid, s)
    }

    fn source(&self, x: &ComplexField) -> Result<ComplexField> {
        if !self.nonlinear {
            return Ok(ComplexField::zeros(&self.grid));
        }
        let st = unpack(&SchrodingerState { u: x.clone(), t: 0.0 });
        Ok(evaluate_sources(&st.eta, &st.u, &self.solver)?.f())
    }

    fn axpy(&self, y: &ComplexField, a: f64, x: &ComplexField) -> ComplexField {
        y + &x.scale(Complex64::new(a, 0.0))
    }

    fn norm(&self, x: &ComplexField) -> f64 {
        x.l2_norm()
    }
}

/// `∂_tη = G(η)(Id+G(η))⁻¹u`, `∂_tu = −(∂_x⁴+1)η − N(η,u)` stepped directly
/// in `(η, u)`. The linear part `(θ(D)u, −(1+D⁴)η)` is a rotation in each
/// mode; the nonlinear part is `(Gψ − θ(D)u, −N)` with `N` from the
/// `(ψ_x, Gψ)` form.
#[derive(Clone, Debug)]
pub struct SurfaceSystem {
    grid: Grid,
    p: Vec<f64>,
    q: Vec<f64>,
    theta: SampledMultiplier,
    solver: SolverConfig,
    nonlinear: bool,
}

impl SurfaceSystem {
    pub fn new(grid: &Grid, solver: SolverConfig, nonlinear: bool) -> Self {
        Self {
            grid: grid.clone(),
            p: real_symbol(&sampled(Multiplier::p(), grid)),
            q: real_symbol(&sampled(Multiplier::q(), grid)),
            theta: sampled(Multiplier::theta(), grid),
            solver,
            nonlinear,
        }
    }
}

impl System for SurfaceSystem {
    type State = (RealField, RealField);

    fn flow(&self, (eta, u): &Self::State, h: f64) -> Self::State {
        let se = eta.spectrum();
        let su = u.spectrum();
        let mut ne = Vec::with_capacity(se.len());
        let mut nu = Vec::with_capacity(su.len());
        for j in 0..se.len() {
            let (s, c) = (h * self.p[j]).sin_cos();
            let q = self.q[j];
            ne.push(c * se[j] + (s / q) * su[j]);
            nu.push(-(q * s) * se[j] + c * su[j]);
        }
        (
            RealField::from_spectrum(&self.grid, ne),
            RealField::from_spectrum(&self.grid, nu),
        )
    }

    fn source(&self, (eta, u): &Self::State) -> Result<Self::State> {
        if !self.nonlinear {
            return Ok((RealField::zeros(&self.grid), RealField::zeros(&self.grid)));
        }
        let s = evaluate_sources(eta, u, &self.solver)?;
        let th = self.theta.apply_real(u)?;
        Ok((dealias(&(&s.dtn.g - &th)), -dealias(&s.n_cross())))
    }

    fn axpy(&self, (ye, yu): &Self::State, a: f64, (xe, xu): &Self::State) -> Self::State {
        (ye + &xe.scale(a), yu + &xu.scale(a))
    }

    fn norm(&self, (eta, u): &Self::State) -> f64 {
        let qe = pack(&SurfaceState {
            eta: eta.clone(),
            u: u.clone(),
            t: 0.0,
        });
        qe.u.l2_norm()
    }
}

/// Steps the same initial data `steps` times in `U` and directly in `(η, u)`
/// with the same scheme; returns `max_k ‖U_k − pack(η_k, u_k)‖_{L²} / ‖U_0‖_{L²}`.
pub fn dual_formulation_defect(initial: &SurfaceState, cfg: &StepperConfig, steps: usize) -> Result<f64> {
    cfg.validate()?;
    let grid = initial.eta.grid();
    let a = SchrodingerSystem::new(grid, cfg.solver, cfg.nonlinear);
    let b = SurfaceSystem::new(grid, cfg.solver, cfg.nonlinear);
    let mut x = pack(initial).u;
    let mut y = (initial.eta.clone(), initial.u.clone());
    let scale = x.l2_norm();
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        x = step_system(&a, &x, cfg)?.0;
        y = step_system(&b, &y, cfg)?.0;
        let py = pack(&SurfaceState {
            eta: y.0.clone(),
            u: y.1.clone(),
            t: 0.0,
        })
        .u;
        worst = worst.max((&x - &py).l2_norm());
    }
    Ok(if scale == 0.0 { worst } else { worst / scale })
}

/// `‖η‖_{W^{2,∞}} / ‖q(D_x)η‖_{Y⁰}`; zero for `η = 0`.
pub fn regularity_ratio(eta: &RealField) -> Result<f64> {
    let qe = apply_q(eta)?;
    let den = ys_norm(&qe, 0.0)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(w_rho_inf_norm(eta, 2.0)? / den)
}

fn apply_q(eta: &RealField) -> Result<RealField> {
    Multiplier::q().sample(eta.grid())?.apply_real(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::Scheme;
    use crate::spectral::p_symbol;

    #[test]
    fn schrodinger_flow_rotates_modes() {
        let g = Grid::periodic(32).unwrap();
        let sys = SchrodingerSystem::new(&g, SolverConfig::default(), false);
        let u0 = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, 3.0 * x));
        let h = 0.37;
        let got = sys.flow(&u0, h);
        let want = u0.scale(Complex64::from_polar(1.0, -h * p_symbol(3.0)));
        assert!((&got - &want).linf_norm() < 1e-14);
    }

    #[test]
    fn surface_flow_matches_packed_flow() {
        let g = Grid::periodic(32).unwrap();
        let eta = RealField::from_fn(&g, |x| 0.2 * x.cos() + 0.05 * (5.0 * x).sin() + 0.1);
        let u = RealField::from_fn(&g, |x| (2.0 * x).sin() - 0.3);
        let a = SchrodingerSystem::new(&g, SolverConfig::default(), false);
        let b = SurfaceSystem::new(&g, SolverConfig::default(), false);
        let st = SurfaceState::new(eta.clone(), u.clone(), 0.0).unwrap();
        let x = a.flow(&pack(&st).u, 0.8);
        let (e2, u2) = b.flow(&(eta, u), 0.8);
        let back = unpack(&SchrodingerState { u: x, t: 0.0 });
        assert!((&back.eta - &e2).linf_norm() < 1e-13);
        assert!((&back.u - &u2).linf_norm() < 1e-13);
    }

    #[test]
    fn dual_formulations_agree_on_nonlinear_steps() {
        let g = Grid::periodic(32).unwrap();
        let st = SurfaceState::new(
            RealField::from_fn(&g, |x| 0.05 * x.cos()),
            RealField::from_fn(&g, |x| 0.05 * (2.0 * x).cos()),
            0.0,
        )
        .unwrap();
        let cfg = StepperConfig {
            dt: 1e-2,
            solver: SolverConfig::default().with_nz(33),
            ..StepperConfig::default()
        };
        for scheme in [Scheme::ExpRk4, Scheme::Strang, Scheme::Picard] {
            let c = StepperConfig { scheme, ..cfg };
            let d = dual_formulation_defect(&st, &c, 3).unwrap();
            assert!(d < 1e-9, "{scheme:?}: {d:e}");
        }
    }

    #[test]
    fn regularity_ratio_of_a_mode() {
        let g = Grid::periodic(64).unwrap();
        let eta = RealField::from_fn(&g, |x| (4.0 * x).cos());
        let r = regularity_ratio(&eta).unwrap();
        // W^{2,∞} = 1 + 4 + 16, Y⁰ of q(4)cos 4x = 2 q(4).
        let q4 = crate::spectral::q_symbol(4.0);
        assert!((r - 21.0 / (2.0 * q4)).abs() < 1e-10, "{r}");
        assert_eq!(regularity_ratio(&RealField::zeros(&g)).unwrap(), 0.0);
    }
}
