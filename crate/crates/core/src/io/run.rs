//! The `run` driver: advance a configured simulation and write its outputs.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use super::config::RunConfig;
use super::output::{write_json, write_snapshot, MonitorWriter, NewtonStats, RunSummary};
use super::presets::initial_state;
use crate::error::GasError;
use crate::monitors::{entropy_work_relations, Monitor, StepPair};
use crate::schemes::{SchemeKind, Simulation};

/// Failure of a CLI action, split by the exit code it maps to.
#[derive(Debug, Error)]
pub enum RunError {
    /// Bad configuration or arguments (exit code 1).
    #[error("{0}")]
    Validation(GasError),
    /// The computation itself failed (exit code 2).
    #[error("{0}")]
    Numerical(GasError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Numerical(_) => 2,
        }
    }
}

/// Builds the simulation described by the configuration.
pub fn build_simulation(cfg: &RunConfig) -> Result<Simulation<f64>, RunError> {
    let gas = cfg.gas_model().map_err(RunError::Validation)?;
    let (mesh, state) = initial_state(cfg).map_err(RunError::Validation)?;
    Simulation::new(cfg.scheme, gas, cfg.scheme_config(), mesh, state, cfg.time_control()).map_err(RunError::Validation)
}

/// Steps the simulation to `t_end` (or `max_steps`), writing snapshots, the monitor series and
/// `summary.json` into `out_dir`. On a numerical failure the partial outputs and a summary with
/// `status = "failed"` are still written.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunSummary, RunError> {
    let mut sim = build_simulation(cfg)?;
    let io = |e: GasError| RunError::Validation(e);
    std::fs::create_dir_all(out_dir).map_err(|e| io(e.into()))?;
    let laws = cfg.monitors().map_err(RunError::Validation)?;
    let mut monitors: Vec<Monitor<f64>> = laws.iter().map(|&l| Monitor::new(l)).collect();
    let mut series = MonitorWriter::create(&out_dir.join("monitors.csv")).map_err(io)?;
    let snap = |sim: &Simulation<f64>| {
        write_snapshot(&out_dir.join(format!("snapshot_{:06}.csv", sim.steps)), &sim.state, &sim.mesh, &sim.gas)
    };
    snap(&sim).map_err(io)?;

    let mut summary = RunSummary {
        status: "ok".into(),
        error: None,
        scheme: cfg.scheme.id().into(),
        preset: cfg.preset.id.id().into(),
        steps: 0,
        final_t: 0.0,
        max_drift: BTreeMap::new(),
        max_abs_residual: BTreeMap::new(),
        max_entropy_residual: 0.0,
        max_work_residual: 0.0,
        newton: NewtonStats::default(),
    };
    let t_end = cfg.time.t_end;
    let max_steps = cfg.time.max_steps.unwrap_or(usize::MAX);
    let mut failure = None;
    while sim.t() < t_end * (1.0 - 1e-12) && sim.steps < max_steps {
        let out = match sim.advance(Some(t_end)) {
            Ok(o) => o,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let pair = StepPair {
            old: &out.old,
            new: &sim.state,
            mesh: &out.mesh,
            gas: &sim.gas,
            scheme: sim.kind,
            cfg: &sim.cfg,
        };
        for m in &mut monitors {
            if let Err(e) = m.observe(&pair) {
                failure = Some(e);
                break;
            }
            let drift = m.drift();
            series.row(sim.t(), m.law, m.total, drift, m.max_abs_residual).map_err(io)?;
            let d = summary.max_drift.entry(m.law.id().into()).or_insert(0.0);
            *d = d.max(drift.abs());
        }
        if failure.is_some() {
            break;
        }
        let (ent, work) = entropy_work_relations(&out.old, &sim.state, &out.mesh, &sim.cfg, &sim.gas, sim.kind);
        let amax = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        summary.max_entropy_residual = summary.max_entropy_residual.max(amax(&ent));
        // the explicit scheme carries no internal-energy variable of its own
        if sim.kind != SchemeKind::ExplicitInvariant {
            summary.max_work_residual = summary.max_work_residual.max(amax(&work));
        }
        let nw = &mut summary.newton;
        nw.total_iterations += out.report.iterations;
        nw.max_iterations = nw.max_iterations.max(out.report.iterations);
        nw.max_residual = nw.max_residual.max(out.report.residual);
        nw.fallbacks += usize::from(out.report.fallback);
        nw.retries += out.retries;
        if cfg.output.snapshot_every > 0 && sim.steps % cfg.output.snapshot_every == 0 {
            snap(&sim).map_err(io)?;
        }
    }
    if cfg.output.snapshot_every == 0 || sim.steps % cfg.output.snapshot_every != 0 {
        snap(&sim).map_err(io)?;
    }
    series.flush().map_err(io)?;
    for m in &monitors {
        summary.max_abs_residual.insert(m.law.id().into(), m.max_abs_residual);
        summary.max_drift.entry(m.law.id().into()).or_insert(0.0);
    }
    summary.steps = sim.steps;
    summary.final_t = sim.t();
    if let Some(e) = &failure {
        summary.status = "failed".into();
        summary.error = Some(e.to_string());
    }
    write_json(&out_dir.join("summary.json"), &summary).map_err(io)?;
    match failure {
        Some(e) => Err(RunError::Numerical(e)),
        None => Ok(summary),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(body: &str) -> RunConfig {
        RunConfig::from_toml_str(body).unwrap()
    }

    const STATIC: &str = r#"
scheme = "sp"
bc = "rigid-walls"
[gas]
n = 2
gamma = 1.4
[mesh]
cells = 20
s_min = 0.0
s_max = 1.0
[time]
t_end = 1.0
tau = 0.01
max_steps = 100
[preset]
id = "uniform-static"
"#;

    #[test]
    fn uniform_static_has_no_drift() {
        let dir = tempfile::tempdir().unwrap();
        let s = run(&config(STATIC), dir.path()).unwrap();
        assert_eq!(s.steps, 100);
        assert!(s.max_drift.values().all(|d| d.abs() <= 1e-12), "{s:?}");
        assert!(dir.path().join("snapshot_000000.csv").exists());
        assert!(dir.path().join("snapshot_000100.csv").exists());
        let json = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        assert!(json.contains("\"final_t\""));
    }

    #[test]
    fn sod_like_conserves_mass_and_energy() {
        let text = r#"
scheme = "sp"
bc = "rigid-walls"
[gas]
n = 0
gamma = 1.4
[mesh]
cells = 100
[time]
t_end = 0.1
cfl = 0.5
[preset]
id = "sod-like-two-state"
"#;
        let dir = tempfile::tempdir().unwrap();
        let s = run(&config(text), dir.path()).unwrap();
        assert!((s.final_t - 0.1).abs() < 1e-12);
        assert!(s.max_drift["mass"] <= 1e-10 && s.max_drift["energy"] <= 1e-10, "{s:?}");
    }

    #[test]
    fn runs_are_deterministic() {
        let text = STATIC.replace("\"uniform-static\"", "\"isentropic-smooth\"\nvelocity = 0.3").replace("max_steps = 100", "max_steps = 10");
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run(&config(&text), a.path()).unwrap();
        run(&config(&text), b.path()).unwrap();
        for f in ["monitors.csv", "summary.json", "snapshot_000010.csv"] {
            assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
        }
    }
}
