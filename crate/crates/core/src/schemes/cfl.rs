use super::SchemeConfig;
use crate::error::{domain, Result};
use crate::gas::{sound_speed, FlowState, GasModel, MassMesh};
use crate::num::{powi, Real};

/// Acoustic time step in the mass coordinate, where the characteristic speed is `r^n rho c`
/// with `r` the cell-average radius. Capped by `cfg.tau_max`.
pub fn cfl_timestep<T: Real>(
    state: &FlowState<T>,
    mesh: &MassMesh<T>,
    gas: &GasModel<T>,
    cfg: &SchemeConfig<T>,
) -> Result<T> {
    let half = T::lit(0.5);
    let mut best = T::infinity();
    for c in 0..state.cells() {
        let rbar = half * (state.r[c] + state.r[c + 1]);
        let speed = powi(rbar, gas.n()) * state.rho[c] * sound_speed(state.rho[c], state.p[c], gas);
        if speed > T::zero() {
            best = best.min(mesh.hs / speed);
        }
    }
    let tau = (cfg.cfl_safety * best).min(cfg.tau_max);
    if !tau.is_finite() || !(tau > T::zero()) {
        return Err(domain("no finite acoustic time step; set tau_max"));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slab(rho: f64, p: f64) -> (FlowState<f64>, MassMesh<f64>) {
        let mesh = MassMesh::uniform(0.0, 0.1, 1, 0.0, 1.0).unwrap();
        let st = FlowState { r: vec![0.0, 0.1 / rho], u: vec![0.0; 2], rho: vec![rho], p: vec![p], eps: vec![0.0] };
        (st, mesh)
    }

    #[test]
    fn unit_sound_speed() {
        let gas = GasModel::new(0, 1.4).unwrap();
        let (st, mesh) = slab(1.0, 1.0 / 1.4);
        let tau = cfl_timestep(&st, &mesh, &gas, &SchemeConfig::default()).unwrap();
        assert!((tau - 0.05).abs() < 1e-15);
        // doubling rho at fixed c halves tau
        let (st2, _) = slab(2.0, 2.0 / 1.4);
        let tau2 = cfl_timestep(&st2, &mesh, &gas, &SchemeConfig::default()).unwrap();
        assert!((tau2 - 0.025).abs() < 1e-15);
    }

    #[test]
    fn vacuum_is_capped() {
        let gas = GasModel::new(0, 1.4).unwrap();
        let (st, mesh) = slab(1.0, 0.0);
        assert!(cfl_timestep(&st, &mesh, &gas, &SchemeConfig::default()).is_err());
        let cfg = SchemeConfig { tau_max: 0.3, ..SchemeConfig::default() };
        assert_eq!(cfl_timestep(&st, &mesh, &gas, &cfg).unwrap(), 0.3);
    }
}
