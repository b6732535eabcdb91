use super::{cfl_timestep, step, SchemeConfig, SchemeKind, StepReport};
use crate::error::{argument, GasError, Result};
use crate::gas::{FlowState, GasModel, MassMesh};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeControl<T> {
    Fixed(T),
    Cfl,
}

/// Result of one accepted step. `mesh` carries the old time level and the accepted step.
#[derive(Debug, Clone)]
pub struct StepOutcome<T> {
    pub old: FlowState<T>,
    pub mesh: MassMesh<T>,
    pub report: StepReport<T>,
    /// How many times the step was halved before it was accepted.
    pub retries: usize,
}

/// Sequential time stepper with step halving on failure.
#[derive(Debug, Clone)]
pub struct Simulation<T> {
    pub kind: SchemeKind,
    pub gas: GasModel<T>,
    pub cfg: SchemeConfig<T>,
    pub mesh: MassMesh<T>,
    pub state: FlowState<T>,
    pub time: TimeControl<T>,
    pub max_retries: usize,
    pub steps: usize,
}

impl<T: Real> Simulation<T> {
    /// Validates the setup. Under CFL control `tau_max` is tightened to ten times the initial step.
    pub fn new(
        kind: SchemeKind,
        gas: GasModel<T>,
        mut cfg: SchemeConfig<T>,
        mesh: MassMesh<T>,
        state: FlowState<T>,
        time: TimeControl<T>,
    ) -> Result<Self> {
        kind.check_applicable(&gas)?;
        cfg.validate()?;
        cfg.bc.check_applicable(gas.n())?;
        state.validate(&gas)?;
        if state.cells() != mesh.cells() {
            return Err(argument("state and mesh disagree on the number of cells"));
        }
        match time {
            TimeControl::Fixed(tau) if !(tau > T::zero()) => {
                return Err(argument("fixed time step must be positive"));
            }
            TimeControl::Cfl => {
                let tau0 = cfl_timestep(&state, &mesh, &gas, &cfg)?;
                cfg.tau_max = cfg.tau_max.min(T::lit(10.0) * tau0);
            }
            _ => {}
        }
        Ok(Self {
            kind,
            gas,
            cfg,
            mesh,
            state,
            time,
            max_retries: 8,
            steps: 0,
        })
    }

    pub fn t(&self) -> T {
        self.mesh.t
    }

    fn proposed_tau(&self, t_end: Option<T>) -> Result<T> {
        let mut tau = match self.time {
            TimeControl::Fixed(tau) => tau,
            TimeControl::Cfl => cfl_timestep(&self.state, &self.mesh, &self.gas, &self.cfg)?,
        };
        if let Some(end) = t_end {
            let left = end - self.mesh.t;
            if !(left > T::zero()) {
                return Err(argument("simulation already reached the end time"));
            }
            // avoid a sliver step at the end
            if left < tau * T::lit(1.000001) {
                tau = left;
            }
        }
        Ok(tau)
    }

    /// Advances one step, halving `tau` on numerical failure.
    pub fn advance(&mut self, t_end: Option<T>) -> Result<StepOutcome<T>> {
        let mut tau = self.proposed_tau(t_end)?;
        let mut retries = 0;
        loop {
            let mesh = self.mesh.at(self.mesh.t, tau);
            match step(self.kind, &self.state, &mesh, &self.gas, &self.cfg) {
                Ok((new, report)) => {
                    let old = std::mem::replace(&mut self.state, new);
                    self.mesh = mesh.at(mesh.t + tau, tau);
                    self.steps += 1;
                    return Ok(StepOutcome { old, mesh, report, retries });
                }
                Err(e @ (GasError::StepFailure { .. } | GasError::Domain(_) | GasError::SingularConstraint(_))) => {
                    if retries >= self.max_retries {
                        return Err(e);
                    }
                    retries += 1;
                    tau = tau * T::lit(0.5);
                }
                Err(e) => return Err(e),
            }
        }
    }
}
