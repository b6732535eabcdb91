use super::{check_inputs, BoundaryCondition, SchemeConfig};
use crate::error::{not_applicable, GasError, Result};
use crate::gas::{FlowState, GasModel, MassMesh};
use crate::num::{powi, Real};

/// One step of the explicit invariant scheme for `gamma = (n+3)/(n+1)`.
///
/// The update order is forced by data flow: positions, then densities from the exact cell-mass
/// identity, then pressures along pathlines, then velocities. The right cell of each node
/// supplies the density ratio in the momentum update.
pub fn explicit_invariant_step<T: Real>(
    state: &FlowState<T>,
    mesh: &MassMesh<T>,
    gas: &GasModel<T>,
    cfg: &SchemeConfig<T>,
) -> Result<FlowState<T>> {
    if !gas.is_gamma_star() {
        return Err(not_applicable(format!(
            "explicit invariant scheme requires gamma = {}, got {}",
            gas.gamma_star(),
            gas.gamma()
        )));
    }
    check_inputs(state, gas, cfg)?;
    let n = gas.n();
    let gamma = gas.gamma();
    let tau = mesh.tau;
    let nodes = state.r.len();
    let cells = nodes - 1;
    let bc = cfg.bc;

    let r_hat: Vec<T> = state.r.iter().zip(&state.u).map(|(&r, &u)| r + tau * u).collect();
    if r_hat.windows(2).any(|w| !(w[1] > w[0])) || (n >= 1 && r_hat[0] < T::zero()) {
        return Err(GasError::StepFailure {
            reason: "mesh tangling: new node positions are not increasing".into(),
            iterations: 0,
            residual: f64::NAN,
        });
    }

    let np1 = n + 1;
    let mut rho_hat = Vec::with_capacity(cells);
    let mut p_hat = Vec::with_capacity(cells);
    for c in 0..cells {
        let vol_old = powi(state.r[c + 1], np1) - powi(state.r[c], np1);
        let vol_new = powi(r_hat[c + 1], np1) - powi(r_hat[c], np1);
        let rh = state.rho[c] * vol_old / vol_new;
        // S is recomputed from the stored pair with the same power evaluation the next step will
        // use, which keeps p/rho^gamma constant to a few ulps over long runs.
        let s = state.p[c] / state.rho[c].powf(gamma);
        rho_hat.push(rh);
        p_hat.push(s * rh.powf(gamma));
    }

    let expo = T::lit(2.0) / gas.np1();
    let mut u_hat = vec![T::zero(); nodes];
    let active = if bc == BoundaryCondition::Periodic { cells } else { nodes };
    for (i, uh) in u_hat.iter_mut().enumerate().take(active) {
        *uh = match bc.pinned_velocity(i, nodes, state.u[i]) {
            Some(target) => target,
            None => {
                let (cl, cr) = bc.neighbours(i, cells);
                let (cl, cr) = (cl.expect("free node has a left cell"), cr.expect("free node has a right cell"));
                let ratio = (rho_hat[cr] / state.rho[cr]).powf(expo);
                state.u[i] - tau * ratio * powi(state.r[i], n) * (state.p[cr] - state.p[cl]) / mesh.hs
            }
        };
    }
    if bc == BoundaryCondition::Periodic {
        u_hat[cells] = u_hat[0];
    }

    let mut out = FlowState {
        r: r_hat,
        u: u_hat,
        rho: rho_hat,
        p: p_hat,
        eps: vec![T::zero(); cells],
    };
    out.refresh_internal_energy(gas)?;
    Ok(out)
}
