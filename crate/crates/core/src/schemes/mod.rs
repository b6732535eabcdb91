//! Time-stepping engines on the staggered mass mesh.
//!
//! All schemes share the ghost-cell convention of [`BoundaryCondition`]: for walls and the fixed
//! center the pressure just outside the domain mirrors the adjacent cell, for the periodic slab
//! it wraps around.

mod cfl;
mod driver;
mod explicit;
mod implicit;
mod tridiag;

pub use cfl::cfl_timestep;
pub use driver::{Simulation, StepOutcome, TimeControl};
pub use explicit::explicit_invariant_step;
pub use implicit::{sp_step, sp_step_modified};
pub use tridiag::{solve_cyclic_tridiagonal, solve_tridiagonal};

use serde::{Deserialize, Serialize};

use crate::error::{argument, not_applicable, Result};
use crate::gas::{FlowState, GasModel};
use crate::num::Real;

/// Which difference scheme advances the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Conservative implicit scheme with the pointwise polytropic closure.
    Sp,
    /// Same scheme with the modified discrete equation of state (requires the special exponent).
    SpModified,
    /// Explicit invariant scheme (requires the special exponent).
    ExplicitInvariant,
}

impl SchemeKind {
    pub fn id(self) -> &'static str {
        match self {
            Self::Sp => "sp",
            Self::SpModified => "sp-modified",
            Self::ExplicitInvariant => "explicit-invariant",
        }
    }

    pub fn requires_gamma_star(self) -> bool {
        !matches!(self, Self::Sp)
    }

    pub fn check_applicable<T: Real>(self, gas: &GasModel<T>) -> Result<()> {
        if self.requires_gamma_star() && !gas.is_gamma_star() {
            return Err(not_applicable(format!(
                "scheme {} requires gamma = (n+3)/(n+1) = {}, got {}",
                self.id(),
                gas.gamma_star(),
                gas.gamma()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    /// `u = 0` at both end nodes.
    RigidWalls,
    /// Node 0 pinned with `u = 0` (the symmetry center for `n >= 1`); the outer node feels no
    /// pressure jump and keeps its velocity.
    FixedCenter,
    /// Periodic plane slab of length `r_N - r_0`; only for `n = 0`.
    Periodic,
}

impl BoundaryCondition {
    pub fn check_applicable(self, n: u32) -> Result<()> {
        match self {
            Self::Periodic if n != 0 => Err(not_applicable("periodic boundaries require n = 0")),
            Self::FixedCenter if n == 0 => Err(not_applicable("fixed-center boundary requires n >= 1")),
            _ => Ok(()),
        }
    }

    /// Target velocity of a node whose velocity is prescribed, `None` for free nodes.
    pub(crate) fn pinned_velocity<T: Real>(self, i: usize, nodes: usize, u_old: T) -> Option<T> {
        match self {
            Self::RigidWalls if i == 0 || i + 1 == nodes => Some(T::zero()),
            Self::FixedCenter if i == 0 => Some(T::zero()),
            Self::FixedCenter if i + 1 == nodes => Some(u_old),
            _ => None,
        }
    }

    /// Cell on the left and right of node `i`; `None` marks a mirrored ghost.
    pub(crate) fn neighbours(self, i: usize, cells: usize) -> (Option<usize>, Option<usize>) {
        match self {
            Self::Periodic => {
                let i = i % cells;
                (Some((i + cells - 1) % cells), Some(i))
            }
            _ => (i.checked_sub(1), (i < cells).then_some(i)),
        }
    }

    /// Cell values just left and right of node `i` with the ghost policy applied.
    pub(crate) fn around<T: Copy>(self, i: usize, cells: &[T]) -> (T, T) {
        let m = cells.len();
        let (l, r) = self.neighbours(i, m);
        match (l, r) {
            (Some(l), Some(r)) => (cells[l], cells[r]),
            (None, Some(r)) => (cells[r], cells[r]),
            (Some(l), None) => (cells[l], cells[l]),
            (None, None) => unreachable!("every node touches a cell"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig<T> {
    /// Implicitness weight of the pressure.
    pub alpha: T,
    pub newton_tol: T,
    pub newton_max_iter: usize,
    pub bc: BoundaryCondition,
    pub cfl_safety: T,
    /// Upper bound on the time step chosen by the CFL rule.
    pub tau_max: T,
}

impl<T: Real> Default for SchemeConfig<T> {
    fn default() -> Self {
        Self {
            alpha: T::lit(0.5),
            newton_tol: T::lit(1e-12),
            newton_max_iter: 50,
            bc: BoundaryCondition::RigidWalls,
            cfl_safety: T::lit(0.5),
            tau_max: T::infinity(),
        }
    }
}

impl<T: Real> SchemeConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= T::zero() && self.alpha <= T::one()) {
            return Err(argument(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if !(self.newton_tol > T::zero()) {
            return Err(argument("newton_tol must be positive"));
        }
        if self.newton_max_iter == 0 {
            return Err(argument("newton_max_iter must be at least 1"));
        }
        if !(self.cfl_safety > T::zero() && self.cfl_safety <= T::one()) {
            return Err(argument("cfl_safety must lie in (0, 1]"));
        }
        if !(self.tau_max > T::zero()) {
            return Err(argument("tau_max must be positive"));
        }
        Ok(())
    }
}

/// Diagnostics of one accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepReport<T> {
    pub iterations: usize,
    pub residual: T,
    pub tau: T,
    /// Whether the nonlinear solve had to fall back to fixed-point iteration.
    pub fallback: bool,
}

/// Discrete surrogate of `r^n`: `(r̂^{n+1} - r^{n+1}) / ((n+1)(r̂ - r))` in its polynomial form,
/// so coincident points need no special treatment.
#[inline]
pub fn r_factor<T: Real>(r: T, r_hat: T, n: u32) -> T {
    match n {
        0 => T::one(),
        1 => T::lit(0.5) * (r_hat + r),
        _ => (r_hat * r_hat + r_hat * r + r * r) / T::lit(3.0),
    }
}

/// `dR/dr̂`.
#[inline]
pub(crate) fn r_factor_dhat<T: Real>(r: T, r_hat: T, n: u32) -> T {
    match n {
        0 => T::zero(),
        1 => T::lit(0.5),
        _ => (T::lit(2.0) * r_hat + r) / T::lit(3.0),
    }
}

/// Advances one step with the chosen scheme.
pub fn step<T: Real>(
    kind: SchemeKind,
    state: &FlowState<T>,
    mesh: &crate::gas::MassMesh<T>,
    gas: &GasModel<T>,
    cfg: &SchemeConfig<T>,
) -> Result<(FlowState<T>, StepReport<T>)> {
    match kind {
        SchemeKind::Sp => sp_step(state, mesh, gas, cfg),
        SchemeKind::SpModified => sp_step_modified(state, mesh, gas, cfg),
        SchemeKind::ExplicitInvariant => explicit_invariant_step(state, mesh, gas, cfg).map(|s| {
            let report = StepReport {
                iterations: 0,
                residual: T::zero(),
                tau: mesh.tau,
                fallback: false,
            };
            (s, report)
        }),
    }
}

/// Shared pre-checks for every step function.
pub(crate) fn check_inputs<T: Real>(
    state: &FlowState<T>,
    gas: &GasModel<T>,
    cfg: &SchemeConfig<T>,
) -> Result<()> {
    cfg.validate()?;
    cfg.bc.check_applicable(gas.n())?;
    state.validate(gas)?;
    if cfg.bc == BoundaryCondition::Periodic && state.cells() < 3 {
        return Err(argument("periodic slab needs at least three cells"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_factor_examples() {
        assert_eq!(r_factor(3.0, 7.0, 0), 1.0);
        assert_eq!(r_factor(2.0, 4.0, 1), 3.0);
        assert_eq!(r_factor(1.0, 1.0, 2), 1.0);
        // matches the quotient definition away from the removable point
        let (r, rh) = (1.3_f64, 1.7_f64);
        for n in 0..3u32 {
            let q = (rh.powi(n as i32 + 1) - r.powi(n as i32 + 1)) / ((n as f64 + 1.0) * (rh - r));
            assert!((q - r_factor(r, rh, n)).abs() < 1e-14);
            let h = 1e-6;
            let fd = (r_factor(r, rh + h, n) - r_factor(r, rh - h, n)) / (2.0 * h);
            assert!((fd - r_factor_dhat(r, rh, n)).abs() < 1e-8);
        }
    }

    #[test]
    fn ghost_policy() {
        let cells = [1.0, 2.0, 3.0];
        assert_eq!(BoundaryCondition::RigidWalls.around(0, &cells), (1.0, 1.0));
        assert_eq!(BoundaryCondition::RigidWalls.around(3, &cells), (3.0, 3.0));
        assert_eq!(BoundaryCondition::Periodic.around(0, &cells), (3.0, 1.0));
        assert_eq!(BoundaryCondition::Periodic.around(3, &cells), (3.0, 1.0));
        assert!(BoundaryCondition::Periodic.check_applicable(1).is_err());
        assert!(BoundaryCondition::FixedCenter.check_applicable(0).is_err());
    }

    #[test]
    fn gamma_star_gate() {
        let g = GasModel::new(0, 1.4_f64).unwrap();
        assert!(SchemeKind::ExplicitInvariant.check_applicable(&g).is_err());
        assert!(SchemeKind::Sp.check_applicable(&g).is_ok());
    }
}
