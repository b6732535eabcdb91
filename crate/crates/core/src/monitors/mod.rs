//! Discrete conservation laws, entropy and work relations, and cumulative drift bookkeeping.
//!
//! Every law has the divergence form `[T]_t + [F]_s = 0` on one time step. Cell laws carry their
//! densities at cells and fluxes at nodes; node laws the other way round, with boundary fluxes
//! taken from the ghost cells of the boundary condition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{argument, not_applicable, GasError, Result};
use crate::gas::{FlowState, GasModel, MassMesh};
use crate::num::Real;
use crate::schemes::{r_factor, BoundaryCondition, SchemeConfig, SchemeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawId {
    Mass,
    Energy,
    Momentum,
    CenterOfMass,
    /// First additional law of the modified closure, density `2t(ε + <u²>/2) - <ru>`.
    Additional1,
    /// Second additional law, with the `τ²<u²>/8` correcting term.
    Additional2,
    EntropyPathline,
}

impl LawId {
    pub const ALL: [LawId; 7] = [
        LawId::Mass,
        LawId::Energy,
        LawId::Momentum,
        LawId::CenterOfMass,
        LawId::Additional1,
        LawId::Additional2,
        LawId::EntropyPathline,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Mass => "mass",
            Self::Energy => "energy",
            Self::Momentum => "momentum",
            Self::CenterOfMass => "center-of-mass",
            Self::Additional1 => "additional-1",
            Self::Additional2 => "additional-2",
            Self::EntropyPathline => "entropy-pathline",
        }
    }

    fn on_nodes(self) -> bool {
        matches!(self, Self::Momentum | Self::CenterOfMass)
    }

    /// Whether the scheme satisfies this law exactly for the given gas.
    pub fn check_applicable<T: Real>(self, scheme: SchemeKind, gas: &GasModel<T>) -> Result<()> {
        use SchemeKind::*;
        let ok = match self {
            Self::Mass => true,
            Self::Energy => matches!(scheme, Sp | SpModified),
            Self::Momentum | Self::CenterOfMass => gas.n() == 0 && matches!(scheme, Sp | SpModified),
            Self::Additional1 | Self::Additional2 => scheme == SpModified && gas.is_gamma_star(),
            Self::EntropyPathline => scheme == ExplicitInvariant,
        };
        if ok {
            Ok(())
        } else {
            Err(not_applicable(format!(
                "law {} does not hold for scheme {} with n={}, gamma={}",
                self.id(),
                scheme.id(),
                gas.n(),
                gas.gamma()
            )))
        }
    }

    /// Laws the scheme satisfies for this gas, in catalog order.
    pub fn applicable<T: Real>(scheme: SchemeKind, gas: &GasModel<T>) -> Vec<LawId> {
        Self::ALL
            .into_iter()
            .filter(|l| l.check_applicable(scheme, gas).is_ok())
            .collect()
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LawId {
    type Err = GasError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| argument(format!("unknown law id '{s}'")))
    }
}

/// One step's worth of a discrete law.
#[derive(Debug, Clone, PartialEq)]
pub struct LawBalance<T> {
    /// `[T]_t + [F]_s` at each cell or node.
    pub residual: Vec<T>,
    pub total_old: T,
    pub total_new: T,
    /// Flux through the left and right ends of the domain during the step.
    pub flux_left: T,
    pub flux_right: T,
}

impl<T: Real> LawBalance<T> {
    /// `Δtotal + τ (F_R - F_L)`: zero when the law holds, whatever the boundary fluxes are.
    pub fn imbalance(&self, tau: T) -> T {
        self.total_new - self.total_old + tau * (self.flux_right - self.flux_left)
    }

    pub fn max_abs_residual(&self) -> T {
        self.residual.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Old and new layer of one accepted step.
pub struct StepPair<'a, T> {
    pub old: &'a FlowState<T>,
    pub new: &'a FlowState<T>,
    /// Old time level and the step length.
    pub mesh: &'a MassMesh<T>,
    pub gas: &'a GasModel<T>,
    pub scheme: SchemeKind,
    pub cfg: &'a SchemeConfig<T>,
}

impl<'a, T: Real> StepPair<'a, T> {
    fn pressure_weight(&self) -> T {
        match self.scheme {
            SchemeKind::Sp => self.cfg.alpha,
            _ => T::lit(0.5),
        }
    }

    /// Weighted cell pressure `p^{(α)}`.
    fn weighted_pressure(&self) -> Vec<T> {
        let a = self.pressure_weight();
        self.old
            .p
            .iter()
            .zip(&self.new.p)
            .map(|(&p, &ph)| a * ph + (T::one() - a) * p)
            .collect()
    }

    /// Node velocity that moves the mesh: `u^{(0.5)}` for the implicit schemes, `u` otherwise.
    fn kinematic_velocity(&self) -> Vec<T> {
        let half = T::lit(0.5);
        match self.scheme {
            SchemeKind::ExplicitInvariant => self.old.u.clone(),
            _ => self.old.u.iter().zip(&self.new.u).map(|(&u, &uh)| half * (u + uh)).collect(),
        }
    }

    fn r_factors(&self) -> Vec<T> {
        self.old
            .r
            .iter()
            .zip(&self.new.r)
            .map(|(&r, &rh)| r_factor(r, rh, self.gas.n()))
            .collect()
    }

    fn node_count(&self) -> usize {
        if self.cfg.bc == BoundaryCondition::Periodic {
            self.old.cells()
        } else {
            self.old.r.len()
        }
    }

    /// Node average `p_*` of the weighted pressure.
    fn star_pressure(&self, pw: &[T]) -> Vec<T> {
        let half = T::lit(0.5);
        (0..self.old.r.len())
            .map(|i| {
                let (l, r) = self.cfg.bc.around(i, pw);
                half * (l + r)
            })
            .collect()
    }

    fn cell_balance(&self, dens_old: &[T], dens_new: &[T], flux: &[T]) -> LawBalance<T> {
        let (tau, h) = (self.mesh.tau, self.mesh.hs);
        let cells = dens_old.len();
        let residual = (0..cells)
            .map(|c| (dens_new[c] - dens_old[c]) / tau + (flux[c + 1] - flux[c]) / h)
            .collect();
        LawBalance {
            residual,
            total_old: dens_old.iter().map(|&d| d * h).sum(),
            total_new: dens_new.iter().map(|&d| d * h).sum(),
            flux_left: flux[0],
            flux_right: flux[cells],
        }
    }

    fn node_balance(&self, dens_old: &[T], dens_new: &[T], flux: &[T]) -> LawBalance<T> {
        let (tau, h) = (self.mesh.tau, self.mesh.hs);
        let nodes = self.node_count();
        let residual = (0..nodes)
            .map(|i| {
                let (l, r) = self.cfg.bc.around(i, flux);
                (dens_new[i] - dens_old[i]) / tau + (r - l) / h
            })
            .collect();
        let (flux_left, _) = self.cfg.bc.around(0, flux);
        let (_, flux_right) = self.cfg.bc.around(nodes - 1, flux);
        LawBalance {
            residual,
            total_old: dens_old[..nodes].iter().map(|&d| d * h).sum(),
            total_new: dens_new[..nodes].iter().map(|&d| d * h).sum(),
            flux_left,
            flux_right,
        }
    }

    /// Mean of a node quantity over the two nodes of each cell.
    fn cell_mean(f: impl Fn(usize) -> T, cells: usize) -> Vec<T> {
        let half = T::lit(0.5);
        (0..cells).map(|c| half * (f(c) + f(c + 1))).collect()
    }

    pub fn balance(&self, law: LawId) -> Result<LawBalance<T>> {
        law.check_applicable(self.scheme, self.gas)?;
        let (old, new) = (self.old, self.new);
        if old.r.len() != new.r.len() || old.cells() != self.mesh.cells() {
            return Err(argument("layers and mesh have inconsistent sizes"));
        }
        let cells = old.cells();
        let half = T::lit(0.5);
        let t0 = self.mesh.t;
        let t1 = t0 + self.mesh.tau;
        let t_mid = half * (t0 + t1);
        let t2_mid = half * (t0 * t0 + t1 * t1);
        let tau = self.mesh.tau;
        let w = self.kinematic_velocity();
        let big_r = self.r_factors();
        let specific_volume = |st: &FlowState<T>| st.rho.iter().map(|&x| T::one() / x).collect::<Vec<T>>();
        Ok(match law {
            LawId::Mass => {
                let flux: Vec<T> = big_r.iter().zip(&w).map(|(&r, &w)| -r * w).collect();
                self.cell_balance(&specific_volume(old), &specific_volume(new), &flux)
            }
            LawId::EntropyPathline => {
                let s_old = old.entropy(self.gas);
                let s_new = new.entropy(self.gas);
                self.cell_balance(&s_old, &s_new, &vec![T::zero(); cells + 1])
            }
            LawId::Momentum | LawId::CenterOfMass => {
                let pw = self.weighted_pressure();
                let (d_old, d_new, flux): (Vec<T>, Vec<T>, Vec<T>) = if law == LawId::Momentum {
                    (old.u.clone(), new.u.clone(), pw)
                } else {
                    (
                        old.r.iter().zip(&old.u).map(|(&r, &u)| r - t0 * u).collect(),
                        new.r.iter().zip(&new.u).map(|(&r, &u)| r - t1 * u).collect(),
                        pw.iter().map(|&p| -t_mid * p).collect(),
                    )
                };
                debug_assert!(law.on_nodes());
                self.node_balance(&d_old, &d_new, &flux)
            }
            LawId::Energy | LawId::Additional1 | LawId::Additional2 => {
                let pw = self.weighted_pressure();
                let pstar = self.star_pressure(&pw);
                let energy = |st: &FlowState<T>| -> Vec<T> {
                    (0..cells)
                        .map(|c| st.eps[c] + half * half * (st.u[c] * st.u[c] + st.u[c + 1] * st.u[c + 1]))
                        .collect()
                };
                let (e_old, e_new) = (energy(old), energy(new));
                let nodes = old.r.len();
                let r_mid: Vec<T> = (0..nodes).map(|i| half * (old.r[i] + new.r[i])).collect();
                match law {
                    LawId::Energy => {
                        let flux: Vec<T> = (0..nodes).map(|i| big_r[i] * pstar[i] * w[i]).collect();
                        self.cell_balance(&e_old, &e_new, &flux)
                    }
                    LawId::Additional1 => {
                        let dens = |st: &FlowState<T>, e: &[T], t: T| -> Vec<T> {
                            let ru = Self::cell_mean(|i| st.r[i] * st.u[i], cells);
                            (0..cells).map(|c| T::lit(2.0) * t * e[c] - ru[c]).collect()
                        };
                        let flux: Vec<T> = (0..nodes)
                            .map(|i| big_r[i] * pstar[i] * (T::lit(2.0) * t_mid * w[i] - r_mid[i]))
                            .collect();
                        self.cell_balance(&dens(old, &e_old, t0), &dens(new, &e_new, t1), &flux)
                    }
                    _ => {
                        let dens = |st: &FlowState<T>, e: &[T], t: T| -> Vec<T> {
                            let ru = Self::cell_mean(|i| st.r[i] * st.u[i], cells);
                            let r2 = Self::cell_mean(|i| st.r[i] * st.r[i], cells);
                            let u2 = Self::cell_mean(|i| st.u[i] * st.u[i], cells);
                            (0..cells)
                                .map(|c| {
                                    t * t * e[c] - t * ru[c] + half * r2[c] + tau * tau * u2[c] * T::lit(0.125)
                                })
                                .collect()
                        };
                        let flux: Vec<T> = (0..nodes)
                            .map(|i| big_r[i] * pstar[i] * (t2_mid * w[i] - t_mid * r_mid[i]))
                            .collect();
                        self.cell_balance(&dens(old, &e_old, t0), &dens(new, &e_new, t1), &flux)
                    }
                }
            }
        })
    }
}

/// Pointwise residual of one discrete law on an accepted step.
pub fn discrete_cl_residual<T: Real>(
    law: LawId,
    old: &FlowState<T>,
    new: &FlowState<T>,
    mesh: &MassMesh<T>,
    gas: &GasModel<T>,
    scheme: SchemeKind,
    cfg: &SchemeConfig<T>,
) -> Result<Vec<T>> {
    StepPair { old, new, mesh, gas, scheme, cfg }
        .balance(law)
        .map(|b| b.residual)
}

/// Per-cell entropy and work residuals.
///
/// For the implicit schemes the entropy residual is `Δp/p^{(α)} - γ Δρ/ρ^{(α)}`; for the explicit
/// scheme it is the relative change of `p/ρ^γ`. The work residual is
/// `ε_t + p^{(α)} (1/ρ)_t` in all cases.
pub fn entropy_work_relations<T: Real>(
    old: &FlowState<T>,
    new: &FlowState<T>,
    mesh: &MassMesh<T>,
    cfg: &SchemeConfig<T>,
    gas: &GasModel<T>,
    scheme: SchemeKind,
) -> (Vec<T>, Vec<T>) {
    let alpha = match scheme {
        SchemeKind::Sp => cfg.alpha,
        _ => T::lit(0.5),
    };
    let one = T::one();
    let tau = mesh.tau;
    let gamma = gas.gamma();
    let mut entropy = Vec::with_capacity(old.cells());
    let mut work = Vec::with_capacity(old.cells());
    for c in 0..old.cells() {
        let pw = alpha * new.p[c] + (one - alpha) * old.p[c];
        let rw = alpha * new.rho[c] + (one - alpha) * old.rho[c];
        entropy.push(match scheme {
            SchemeKind::ExplicitInvariant => {
                let s0 = old.p[c] / old.rho[c].powf(gamma);
                let s1 = new.p[c] / new.rho[c].powf(gamma);
                (s1 - s0) / s0
            }
            _ => (new.p[c] - old.p[c]) / pw - gamma * (new.rho[c] - old.rho[c]) / rw,
        });
        work.push((new.eps[c] - old.eps[c]) / tau + pw * (one / new.rho[c] - one / old.rho[c]) / tau);
    }
    (entropy, work)
}

/// Cumulative bookkeeping of one law over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Monitor<T> {
    pub law: LawId,
    pub total0: Option<T>,
    pub total: T,
    /// `Σ (Δtotal + τ (F_R - F_L))` over accepted steps.
    pub accumulated_imbalance: T,
    /// `Σ τ (F_R - F_L)`.
    pub boundary_flux: T,
    pub max_abs_residual: T,
    pub last_residual: Vec<T>,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorReport<T> {
    pub law: LawId,
    pub residual: Vec<T>,
    pub total: T,
    /// Imbalance relative to `max(|total(0)|, 1)`.
    pub drift: T,
    pub boundary_flux: T,
    pub max_abs_residual: T,
}

impl<T: Real> Monitor<T> {
    pub fn new(law: LawId) -> Self {
        Self {
            law,
            total0: None,
            total: T::zero(),
            accumulated_imbalance: T::zero(),
            boundary_flux: T::zero(),
            max_abs_residual: T::zero(),
            last_residual: Vec::new(),
            steps: 0,
        }
    }

    pub fn observe(&mut self, pair: &StepPair<'_, T>) -> Result<()> {
        let b = pair.balance(self.law)?;
        let tau = pair.mesh.tau;
        if self.total0.is_none() {
            self.total0 = Some(b.total_old);
        }
        self.accumulated_imbalance = self.accumulated_imbalance + b.imbalance(tau);
        self.boundary_flux = self.boundary_flux + tau * (b.flux_right - b.flux_left);
        self.max_abs_residual = self.max_abs_residual.max(b.max_abs_residual());
        self.total = b.total_new;
        self.last_residual = b.residual;
        self.steps += 1;
        Ok(())
    }

    pub fn drift(&self) -> T {
        let scale = self.total0.map_or(T::one(), |t| t.abs().max(T::one()));
        self.accumulated_imbalance / scale
    }

    pub fn report(&self) -> MonitorReport<T> {
        MonitorReport {
            law: self.law,
            residual: self.last_residual.clone(),
            total: self.total,
            drift: self.drift(),
            boundary_flux: self.boundary_flux,
            max_abs_residual: self.max_abs_residual,
        }
    }
}

#[cfg(test)]
mod tests;
