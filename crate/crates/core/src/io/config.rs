//! TOML run configuration with strict key checking and load-time validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{GasError, Result};
use crate::gas::{EntropyProfile, GasModel, MassMesh};
use crate::monitors::LawId;
use crate::schemes::{BoundaryCondition, SchemeConfig, SchemeKind, TimeControl};

use super::presets::PresetId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    pub n: u32,
    /// Omitted or ignored when `gamma_star` is set.
    pub gamma: Option<f64>,
    #[serde(default)]
    pub gamma_star: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EntropySection {
    Constant { a0: f64 },
    Power { a0: f64, q: f64 },
    Exponential { a0: f64, q: f64 },
    Tabulated { s: Vec<f64>, values: Vec<f64> },
}

impl EntropySection {
    pub fn build(&self) -> Result<EntropyProfile<f64>> {
        match self {
            Self::Constant { a0 } => EntropyProfile::constant(*a0),
            Self::Power { a0, q } => EntropyProfile::power(*a0, *q),
            Self::Exponential { a0, q } => EntropyProfile::exponential(*a0, *q),
            Self::Tabulated { s, values } => EntropyProfile::tabulated(s.clone(), values.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    pub cells: usize,
    #[serde(default)]
    pub s_min: f64,
    #[serde(default = "one")]
    pub s_max: f64,
    /// Radius of node 0.
    #[serde(default)]
    pub r_origin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: f64,
    /// Fixed step; mutually exclusive with `cfl`.
    pub tau: Option<f64>,
    /// CFL safety factor; mutually exclusive with `tau`.
    pub cfl: Option<f64>,
    /// Hard cap on the number of accepted steps.
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSection {
    pub id: PresetId,
    #[serde(default = "one")]
    pub rho0: f64,
    #[serde(default = "one")]
    pub p0: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub velocity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "default_newton_tol")]
    pub newton_tol: f64,
    #[serde(default = "default_newton_iter")]
    pub newton_max_iter: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self { newton_tol: default_newton_tol(), newton_max_iter: default_newton_iter() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Write a snapshot every this many steps; 0 writes only the initial and final layers.
    #[serde(default)]
    pub snapshot_every: usize,
    /// Laws to monitor; all laws the scheme satisfies when omitted.
    pub monitors: Option<Vec<LawId>>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_dir(), snapshot_every: 0, monitors: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: SchemeKind,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub bc: BoundaryCondition,
    pub gas: GasSection,
    pub entropy: Option<EntropySection>,
    pub mesh: MeshSection,
    pub time: TimeSection,
    pub preset: PresetSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn one() -> f64 {
    1.0
}
fn default_amplitude() -> f64 {
    0.1
}
fn default_alpha() -> f64 {
    0.5
}
fn default_newton_tol() -> f64 {
    1e-12
}
fn default_newton_iter() -> usize {
    50
}
fn default_dir() -> PathBuf {
    PathBuf::from("output")
}

/// Environment variable overriding `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "GASDYN_OUTPUT_DIR";

/// 1-based line of the first `key =` assignment in `text`, for error messages.
fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn at(text: &str, key: &str, msg: impl std::fmt::Display) -> GasError {
    match line_of(text, key) {
        Some(l) => GasError::Config(format!("line {l}: {msg}")),
        None => GasError::Config(msg.to_string()),
    }
}

impl RunConfig {
    /// Parses and validates a configuration. Errors carry the offending line where known.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| GasError::Config(e.to_string()))?;
        cfg.validate_with_source(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GasError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            GasError::Config(m) => GasError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_source("")
    }

    fn validate_with_source(&self, text: &str) -> Result<()> {
        let gas = self.gas_model().map_err(|e| at(text, "gamma", e))?;
        self.scheme.check_applicable(&gas).map_err(|e| at(text, "scheme", e))?;
        self.bc.check_applicable(gas.n()).map_err(|e| at(text, "bc", e))?;
        self.scheme_config().validate().map_err(|e| at(text, "alpha", e))?;
        self.mesh().map_err(|e| at(text, "cells", e))?;
        if self.bc == BoundaryCondition::Periodic && self.mesh.cells < 3 {
            return Err(at(text, "cells", "periodic boundaries need at least 3 cells"));
        }
        if gas.n() >= 1 && self.mesh.r_origin < 0.0 {
            return Err(at(text, "r_origin", "r_origin must be non-negative"));
        }
        if !(self.time.t_end > 0.0) {
            return Err(at(text, "t_end", "t_end must be positive"));
        }
        match (self.time.tau, self.time.cfl) {
            (Some(_), Some(_)) => return Err(at(text, "cfl", "give either tau or cfl, not both")),
            (None, None) => return Err(at(text, "t_end", "one of tau or cfl is required")),
            (Some(t), None) if !(t > 0.0) => return Err(at(text, "tau", "tau must be positive")),
            (None, Some(c)) if !(c > 0.0 && c <= 1.0) => return Err(at(text, "cfl", "cfl must lie in (0, 1]")),
            _ => {}
        }
        if let Some(e) = &self.entropy {
            e.build().map_err(|err| at(text, "kind", err))?;
        }
        if let Some(list) = &self.output.monitors {
            for law in list {
                law.check_applicable(self.scheme, &gas).map_err(|e| at(text, "monitors", e))?;
            }
        }
        self.preset.validate(&gas, self.bc, self.entropy_profile()?.as_ref()).map_err(|e| at(text, "id", e))?;
        super::presets::initial_state(self).map(|_| ()).map_err(|e| at(text, "id", e))
    }

    pub fn gas_model(&self) -> Result<GasModel<f64>> {
        if self.gas.gamma_star {
            return GasModel::with_gamma_star(self.gas.n);
        }
        match self.gas.gamma {
            Some(g) => GasModel::new(self.gas.n, g),
            None => Err(GasError::Config("gas.gamma is required unless gamma_star = true".into())),
        }
    }

    pub fn entropy_profile(&self) -> Result<Option<EntropyProfile<f64>>> {
        self.entropy.as_ref().map(EntropySection::build).transpose()
    }

    pub fn scheme_config(&self) -> SchemeConfig<f64> {
        SchemeConfig {
            alpha: self.alpha,
            newton_tol: self.solver.newton_tol,
            newton_max_iter: self.solver.newton_max_iter,
            bc: self.bc,
            cfl_safety: self.time.cfl.unwrap_or(0.5),
            ..SchemeConfig::default()
        }
    }

    pub fn mesh(&self) -> Result<MassMesh<f64>> {
        MassMesh::uniform(self.mesh.s_min, self.mesh.s_max, self.mesh.cells, 0.0, self.time.tau.unwrap_or(1.0))
    }

    pub fn time_control(&self) -> TimeControl<f64> {
        match self.time.tau {
            Some(t) => TimeControl::Fixed(t),
            None => TimeControl::Cfl,
        }
    }

    /// `output.dir`, unless overridden by the environment.
    pub fn output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| self.output.dir.clone())
    }

    pub fn monitors(&self) -> Result<Vec<LawId>> {
        let gas = self.gas_model()?;
        Ok(self.output.monitors.clone().unwrap_or_else(|| LawId::applicable(self.scheme, &gas)))
    }
}
