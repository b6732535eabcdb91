//! Richardson self-convergence on a ladder of refinements.

use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use super::output::fmt17;
use super::run::{build_simulation, RunError};
use crate::error::{argument, GasError, Result};
use crate::gas::FlowState;
use crate::schemes::{cfl_timestep, SchemeKind, TimeControl};

/// One refinement level: `h` halves from the previous level, `tau` shrinks by [`tau_refinement`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelResult {
    pub level: usize,
    pub cells: usize,
    pub h: f64,
    pub tau: f64,
    /// Max-norm distance to the finest level, restricted to this level's mesh.
    pub error_vs_finest: f64,
    /// Max-norm distance to the next finer level.
    pub diff_to_next: Option<f64>,
    /// `log2(d_l / d_{l+1})` from three consecutive levels; `None` when undefined.
    pub observed_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub levels: Vec<LevelResult>,
    /// Set when the preset has discontinuities and orders are not meaningful.
    pub warning: Option<String>,
    /// True when all differences vanish, so the order is undefined.
    pub order_undefined: bool,
}

impl ConvergenceTable {
    /// Smallest defined observed order.
    pub fn min_order(&self) -> Option<f64> {
        self.levels.iter().filter_map(|l| l.observed_order).reduce(f64::min)
    }
}

/// Differences below this are treated as round-off.
const NOISE_FLOOR: f64 = 1e-13;

/// Max-norm distance between a coarse layer and a layer refined `2^k` times: nodes by
/// injection, specific volume by averaging (which is exact for cell volumes), pressure by
/// averaging.
fn distance(coarse: &FlowState<f64>, fine: &FlowState<f64>) -> f64 {
    let ratio = fine.cells() / coarse.cells();
    let mut d = 0.0_f64;
    for i in 0..coarse.r.len() {
        d = d.max((coarse.r[i] - fine.r[i * ratio]).abs());
        d = d.max((coarse.u[i] - fine.u[i * ratio]).abs());
    }
    let inv = 1.0 / ratio as f64;
    for c in 0..coarse.cells() {
        let cells = c * ratio..(c + 1) * ratio;
        let v: f64 = fine.rho[cells.clone()].iter().map(|r| 1.0 / r).sum::<f64>() * inv;
        let p: f64 = fine.p[cells].iter().sum::<f64>() * inv;
        d = d.max((1.0 / coarse.rho[c] - v).abs());
        d = d.max((coarse.p[c] - p).abs());
    }
    d
}

/// Factor by which `tau` shrinks per level.
///
/// The explicit scheme updates positions and velocities from the old layer, which is only
/// stable along `tau = O(h^2)`; the implicit schemes refine `tau` with `h`.
pub fn tau_refinement(kind: SchemeKind) -> f64 {
    match kind {
        SchemeKind::ExplicitInvariant => 4.0,
        SchemeKind::Sp | SchemeKind::SpModified => 2.0,
    }
}

fn level_config(base: &RunConfig, level: usize, tau0: f64) -> RunConfig {
    let mut c = base.clone();
    c.mesh.cells = base.mesh.cells << level;
    c.time.tau = Some(tau0 / tau_refinement(base.scheme).powi(level as i32));
    c.time.cfl = None;
    c.time.max_steps = None;
    c
}

fn run_level(cfg: &RunConfig) -> std::result::Result<FlowState<f64>, RunError> {
    let mut sim = build_simulation(cfg)?;
    while sim.t() < cfg.time.t_end * (1.0 - 1e-12) {
        sim.advance(Some(cfg.time.t_end)).map_err(RunError::Numerical)?;
    }
    Ok(sim.state)
}

/// Runs `levels` refinements concurrently and estimates observed orders.
///
/// The level-0 step is the configured `tau`, or the CFL step of the initial layer. Orders are
/// reported in `h`.
pub fn convergence(cfg: &RunConfig, levels: usize) -> std::result::Result<ConvergenceTable, RunError> {
    if levels < 3 {
        return Err(RunError::Validation(argument("the Richardson estimate needs at least 3 levels")));
    }
    let tau0 = match cfg.time_control() {
        TimeControl::Fixed(t) => t,
        TimeControl::Cfl => {
            let sim = build_simulation(cfg)?;
            cfl_timestep(&sim.state, &sim.mesh, &sim.gas, &sim.cfg).map_err(RunError::Numerical)?
        }
    };
    let configs: Vec<RunConfig> = (0..levels).map(|l| level_config(cfg, l, tau0)).collect();
    let states: Vec<std::result::Result<FlowState<f64>, RunError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|c| scope.spawn(move || run_level(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(RunError::Numerical(GasError::Range("worker panicked".into())))))
            .collect()
    });
    let states = states.into_iter().collect::<std::result::Result<Vec<_>, _>>()?;
    let finest = &states[levels - 1];
    let diffs: Vec<f64> = (0..levels - 1).map(|l| distance(&states[l], &states[l + 1])).collect();
    let undefined = diffs.iter().all(|&d| d <= NOISE_FLOOR);
    let rows = (0..levels)
        .map(|l| {
            let c = &configs[l];
            let order = (l + 2 < levels && diffs[l] > NOISE_FLOOR && diffs[l + 1] > NOISE_FLOOR)
                .then(|| (diffs[l] / diffs[l + 1]).log2());
            LevelResult {
                level: l,
                cells: c.mesh.cells,
                h: (c.mesh.s_max - c.mesh.s_min) / c.mesh.cells as f64,
                tau: c.time.tau.unwrap_or(f64::NAN),
                error_vs_finest: distance(&states[l], finest),
                diff_to_next: diffs.get(l).copied(),
                observed_order: order,
            }
        })
        .collect();
    let warning = (!cfg.preset.id.is_smooth())
        .then(|| format!("preset {} is not smooth; observed orders are not meaningful", cfg.preset.id));
    Ok(ConvergenceTable { levels: rows, warning, order_undefined: undefined })
}

/// Writes `level, cells, h, tau, error_vs_finest, diff_to_next, observed_order`; undefined
/// entries are left empty.
pub fn write_convergence_csv(path: &Path, table: &ConvergenceTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["level", "cells", "h", "tau", "error_vs_finest", "diff_to_next", "observed_order"])?;
    for l in &table.levels {
        w.write_record([
            l.level.to_string(),
            l.cells.to_string(),
            fmt17(l.h),
            fmt17(l.tau),
            fmt17(l.error_vs_finest),
            l.diff_to_next.map(fmt17).unwrap_or_default(),
            l.observed_order.map(fmt17).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_static_has_undefined_order() {
        let cfg = RunConfig::from_toml_str(
            "scheme = \"sp\"\nbc = \"rigid-walls\"\n[gas]\nn = 0\ngamma = 1.4\n[mesh]\ncells = 8\n[time]\nt_end = 0.05\ntau = 0.01\n[preset]\nid = \"uniform-static\"\n",
        )
        .unwrap();
        let t = convergence(&cfg, 3).unwrap();
        assert!(t.order_undefined);
        assert!(t.levels.iter().all(|l| l.error_vs_finest == 0.0 && l.observed_order.is_none()));
        assert!(convergence(&cfg, 2).is_err());
        let dir = tempfile::tempdir().unwrap();
        write_convergence_csv(&dir.path().join("c.csv"), &t).unwrap();
    }
}
