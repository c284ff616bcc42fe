use std::fmt;
use std::str::FromStr;

use super::systems::{SchrodingerSystem, System};
use super::{SchrodingerState, SolverConfig};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheme {
    /// Classical RK4 on `e^{itp(D)}U` (Lawson integrating factor).
    #[default]
    ExpRk4,
    /// Half linear flow, Heun step on `F`, half linear flow.
    Strang,
    /// Trapezoid Duhamel step solved by fixed-point iteration.
    Picard,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExpRk4 => "exp-rk4",
            Self::Strang => "strang",
            Self::Picard => "picard",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp-rk4" => Ok(Self::ExpRk4),
            "strang" => Ok(Self::Strang),
            "picard" => Ok(Self::Picard),
            other => Err(Error::InvalidArgument(format!(
                "unknown scheme `{other}` (expected exp-rk4, strang or picard)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub dt: f64,
    /// Picard stops once successive iterates differ by at most
    /// `picard_tol · ‖U‖_{L²}`.
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub solver: SolverConfig,
    /// `false` replaces `F` by zero, leaving the exact linear flow.
    pub nonlinear: bool,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::ExpRk4,
            dt: 1e-3,
            picard_tol: 1e-12,
            picard_max_iter: 30,
            solver: SolverConfig::default(),
            nonlinear: true,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.picard_tol > 0.0) || self.picard_max_iter == 0 {
            return Err(Error::InvalidArgument(
                "picard tolerance and iteration cap must be positive".into(),
            ));
        }
        self.solver.validate()
    }
}

/// Successive distances `‖U^{(k+1)} − U^{(k)}‖_{L²}` of one Picard solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PicardTrace {
    pub distances: Vec<f64>,
}

impl PicardTrace {
    /// `d_{k+1} / d_k`; pairs with `d_k = 0` are skipped.
    pub fn ratios(&self) -> Vec<f64> {
        self.distances
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }

    pub fn iterations(&self) -> usize {
        self.distances.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepReport {
    /// Number of `F` evaluations.
    pub evaluations: usize,
    pub picard: Option<PicardTrace>,
}

/// One step of size `cfg.dt` of any [`System`].
pub fn step_system<S: System>(sys: &S, x: &S::State, cfg: &StepperConfig) -> Result<(S::State, StepReport)> {
    let h = cfg.dt;
    match cfg.scheme {
        Scheme::ExpRk4 => {
            let a = sys.source(x)?;
            let xa = sys.flow(&sys.axpy(x, 0.5 * h, &a), 0.5 * h);
            let b = sys.source(&xa)?;
            let half = sys.flow(x, 0.5 * h);
            let xb = sys.axpy(&half, 0.5 * h, &b);
            let c = sys.source(&xb)?;
            let xc = sys.axpy(&sys.flow(x, h), h, &sys.flow(&c, 0.5 * h));
            let d = sys.source(&xc)?;
            let bc = sys.flow(&sys.axpy(&b, 1.0, &c), 0.5 * h);
            let mut acc = sys.axpy(&d, 2.0, &bc);
            acc = sys.axpy(&acc, 1.0, &sys.flow(&a, h));
            let out = sys.axpy(&sys.flow(x, h), h / 6.0, &acc);
            Ok((
                out,
                StepReport {
                    evaluations: 4,
                    picard: None,
                },
            ))
        }
        Scheme::Strang => {
            let y = sys.flow(x, 0.5 * h);
            let k1 = sys.source(&y)?;
            let k2 = sys.source(&sys.axpy(&y, h, &k1))?;
            let y = sys.axpy(&sys.axpy(&y, 0.5 * h, &k1), 0.5 * h, &k2);
            Ok((
                sys.flow(&y, 0.5 * h),
                StepReport {
                    evaluations: 2,
                    picard: None,
                },
            ))
        }
        Scheme::Picard => {
            let f0 = sys.source(x)?;
            let base = sys.flow(&sys.axpy(x, 0.5 * h, &f0), h);
            let mut cur = sys.flow(&sys.axpy(x, h, &f0), h);
            let mut trace = PicardTrace::default();
            for _ in 0..cfg.picard_max_iter {
                let f = sys.source(&cur)?;
                let next = sys.axpy(&base, 0.5 * h, &f);
                let d = sys.distance(&next, &cur);
                trace.distances.push(d);
                let done = d <= cfg.picard_tol * sys.norm(&next);
                cur = next;
                if done {
                    return Ok((
                        cur,
                        StepReport {
                            evaluations: 1 + trace.iterations(),
                            picard: Some(trace),
                        },
                    ));
                }
                if !d.is_finite() {
                    break;
                }
            }
            Err(Error::PicardNotContracting {
                distances: trace.distances,
            })
        }
    }
}

/// One step of `∂_tU + ip(D_x)U = F(U)`.
pub fn step(s: &SchrodingerState, cfg: &StepperConfig) -> Result<(SchrodingerState, StepReport)> {
    cfg.validate()?;
    let sys = SchrodingerSystem::new(s.u.grid(), cfg.solver, cfg.nonlinear);
    let (u, report) = step_system(&sys, &s.u, cfg)?;
    Ok((SchrodingerState { u, t: s.t + cfg.dt }, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{pack, unpack, SurfaceState};
    use crate::spectral::{p_symbol, ComplexField, Grid, RealField};
    use num_complex::Complex64;

    const SCHEMES: [Scheme; 3] = [Scheme::ExpRk4, Scheme::Strang, Scheme::Picard];

    fn linear(scheme: Scheme, dt: f64) -> StepperConfig {
        StepperConfig {
            scheme,
            dt,
            nonlinear: false,
            ..StepperConfig::default()
        }
    }

    #[test]
    fn linear_limit_is_exact() {
        let g = Grid::periodic(32).unwrap();
        let u0 = ComplexField::from_fn(&g, |x| Complex64::from_polar(1.0, 3.0 * x));
        for scheme in SCHEMES {
            let cfg = linear(scheme, 0.05);
            let (s1, _) = step(&SchrodingerState { u: u0.clone(), t: 0.0 }, &cfg).unwrap();
            let want = u0.scale(Complex64::from_polar(1.0, -0.05 * p_symbol(3.0)));
            assert!((&s1.u - &want).linf_norm() < 1e-13, "{scheme}");
            assert_eq!(s1.t, 0.05);
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = Grid::periodic(16).unwrap();
        let z = SchrodingerState {
            u: ComplexField::zeros(&g),
            t: 0.0,
        };
        for scheme in SCHEMES {
            let cfg = StepperConfig {
                scheme,
                dt: 0.1,
                solver: SolverConfig::default().with_nz(17),
                ..StepperConfig::default()
            };
            let (s, _) = step(&z, &cfg).unwrap();
            assert_eq!(s.u.linf_norm(), 0.0, "{scheme}");
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SCHEMES {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert!("euler".parse::<Scheme>().is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            StepperConfig { dt: 0.0, ..Default::default() },
            StepperConfig { dt: f64::NAN, ..Default::default() },
            StepperConfig { picard_tol: 0.0, ..Default::default() },
            StepperConfig { picard_max_iter: 0, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn picard_reports_contraction() {
        let g = Grid::periodic(32).unwrap();
        let st = SurfaceState::new(
            RealField::from_fn(&g, |x| 0.05 * x.cos()),
            RealField::from_fn(&g, |x| 0.05 * (2.0 * x).cos()),
            0.0,
        )
        .unwrap();
        let cfg = StepperConfig {
            scheme: Scheme::Picard,
            dt: 1e-2,
            solver: SolverConfig::default().with_nz(33),
            ..StepperConfig::default()
        };
        let (s1, rep) = step(&pack(&st), &cfg).unwrap();
        let tr = rep.picard.unwrap();
        assert!(tr.iterations() <= 10);
        assert!(tr.ratios().iter().all(|&r| r < 0.5), "{:?}", tr.ratios());
        assert!(unpack(&s1).eta.is_finite());
    }

    #[test]
    fn picard_cap_is_an_error() {
        let g = Grid::periodic(32).unwrap();
        let st = SurfaceState::new(
            RealField::from_fn(&g, |x| 0.05 * x.cos()),
            RealField::from_fn(&g, |x| 0.05 * (2.0 * x).cos()),
            0.0,
        )
        .unwrap();
        let cfg = StepperConfig {
            scheme: Scheme::Picard,
            dt: 1e-2,
            picard_tol: 1e-300,
            picard_max_iter: 2,
            solver: SolverConfig::default().with_nz(33),
            ..StepperConfig::default()
        };
        match step(&pack(&st), &cfg) {
            Err(Error::PicardNotContracting { distances }) => assert_eq!(distances.len(), 2),
            other => panic!("expected a contraction failure, got {other:?}"),
        }
    }
}
