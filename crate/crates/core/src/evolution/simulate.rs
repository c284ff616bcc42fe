use super::stepper::{step_system, PicardTrace, StepperConfig};
use super::systems::SchrodingerSystem;
use super::{pack, unpack, SchrodingerState, SurfaceState};
use crate::diagnostics::{diagnostics_row, DiagnosticsRow};
use crate::error::{Error, Result};

/// Everything [`simulate`] needs besides the code itself.
#[derive(Clone, Debug)]
pub struct Run {
    pub initial: SurfaceState,
    pub stepper: StepperConfig,
    pub t_final: f64,
    /// Record a snapshot every this many steps (and at the last step).
    pub snapshot_every: usize,
    /// Record a diagnostics row every this many steps (and at the last step).
    pub diagnostics_every: usize,
    /// Abort once `‖U‖_{L²}` exceeds this.
    pub l2_guard: f64,
}

impl Run {
    pub fn validate(&self) -> Result<()> {
        self.stepper.validate()?;
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        if self.snapshot_every == 0 || self.diagnostics_every == 0 {
            return Err(Error::InvalidArgument("output cadences must be at least 1".into()));
        }
        if !(self.l2_guard > 0.0) {
            return Err(Error::InvalidArgument("l2_guard must be positive".into()));
        }
        Ok(())
    }

    /// Step count and the step actually taken: `dt` is shrunk so that an
    /// integer number of steps lands exactly on `t_final`.
    pub fn schedule(&self) -> (usize, f64) {
        if self.t_final == 0.0 {
            return (0, self.stepper.dt);
        }
        let ratio = self.t_final / self.stepper.dt;
        let steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio {
            ratio.round()
        } else {
            ratio.ceil()
        }
        .max(1.0) as usize;
        (steps, self.t_final / steps as f64)
    }
}

/// Output of a run, in the order it was produced.
pub enum Event<'a> {
    Snapshot(&'a SurfaceState),
    Diagnostics(&'a DiagnosticsRow),
    Picard(&'a PicardTrace),
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub snapshots: Vec<SurfaceState>,
    pub diagnostics: Vec<DiagnosticsRow>,
    pub picard: Vec<PicardTrace>,
    pub steps: usize,
    pub dt: f64,
}

impl Trajectory {
    pub fn last(&self) -> Option<&SurfaceState> {
        self.snapshots.last()
    }
}

/// Runs to `t_final`, handing every output to `observer` as soon as it
/// exists. Returns the number of steps and the step size.
pub fn simulate_with(run: &Run, mut observer: impl FnMut(Event<'_>) -> Result<()>) -> Result<(usize, f64)> {
    run.validate()?;
    let (steps, dt) = run.schedule();
    let cfg = StepperConfig { dt, ..run.stepper };
    let grid = run.initial.eta.grid();
    let sys = SchrodingerSystem::new(grid, cfg.solver, cfg.nonlinear);
    let t0 = run.initial.t;
    let mut u = pack(&run.initial).u;
    guard(run, t0, u.l2_norm())?;
    observer(Event::Snapshot(&run.initial))?;
    observer(Event::Diagnostics(&diagnostics_row(&run.initial, &cfg.solver)?))?;
    for k in 1..=steps {
        let (next, report) = step_system(&sys, &u, &cfg)?;
        u = next;
        let t = t0 + k as f64 * dt;
        if let Some(tr) = &report.picard {
            observer(Event::Picard(tr))?;
        }
        if !u.is_finite() {
            return Err(Error::NonFinite("state after a time step"));
        }
        guard(run, t, u.l2_norm())?;
        let last = k == steps;
        let snap = last || k % run.snapshot_every == 0;
        let diag = last || k % run.diagnostics_every == 0;
        if snap || diag {
            let st = unpack(&SchrodingerState { u: u.clone(), t });
            if snap {
                observer(Event::Snapshot(&st))?;
            }
            if diag {
                observer(Event::Diagnostics(&diagnostics_row(&st, &cfg.solver)?))?;
            }
        }
    }
    Ok((steps, dt))
}

fn guard(run: &Run, t: f64, norm: f64) -> Result<()> {
    if norm > run.l2_guard {
        return Err(Error::GuardTripped {
            t,
            norm,
            guard: run.l2_guard,
        });
    }
    Ok(())
}

/// Runs to `t_final` and collects everything in memory.
pub fn simulate(run: &Run) -> Result<Trajectory> {
    let mut traj = Trajectory::default();
    let (steps, dt) = simulate_with(run, |e| {
        match e {
            Event::Snapshot(s) => traj.snapshots.push(s.clone()),
            Event::Diagnostics(r) => traj.diagnostics.push(r.clone()),
            Event::Picard(p) => traj.picard.push(p.clone()),
        }
        Ok(())
    })?;
    traj.steps = steps;
    traj.dt = dt;
    Ok(traj)
}
