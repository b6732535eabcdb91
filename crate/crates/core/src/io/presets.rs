//! Closed-form initial data.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{PresetSection, RunConfig};
use crate::error::{not_applicable, Result};
use crate::gas::{init_state, EntropyCase, EntropyProfile, FlowState, FnProfile, GasModel, MassMesh};
use crate::schemes::BoundaryCondition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetId {
    /// Gas at rest with `ρ = rho0`, `p = p0`.
    UniformStatic,
    /// Uniform slab moving with `u = velocity`; plane and periodic only.
    GalileanSlab,
    /// Smooth density and velocity waves on a constant-entropy gas. With walls the density is
    /// `rho0 (1 + A cos 2πξ)` and the velocity `V sin πξ`, with `ξ` the normalised mass.
    IsentropicSmooth,
    /// Smooth waves with `S = a0 s^q`.
    PowerEntropySmooth,
    /// Smooth waves with `S = a0 e^{q s}`.
    ExponentialEntropySmooth,
    /// Two constant states at rest meeting at the middle of the mass range.
    SodLikeTwoState,
}

impl PresetId {
    pub const ALL: [PresetId; 6] = [
        Self::UniformStatic,
        Self::GalileanSlab,
        Self::IsentropicSmooth,
        Self::PowerEntropySmooth,
        Self::ExponentialEntropySmooth,
        Self::SodLikeTwoState,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::UniformStatic => "uniform-static",
            Self::GalileanSlab => "galilean-slab",
            Self::IsentropicSmooth => "isentropic-smooth",
            Self::PowerEntropySmooth => "power-entropy-smooth",
            Self::ExponentialEntropySmooth => "exponential-entropy-smooth",
            Self::SodLikeTwoState => "sod-like-two-state",
        }
    }

    pub fn is_smooth(self) -> bool {
        self != Self::SodLikeTwoState
    }

    /// Entropy case the preset expects in the `[entropy]` section; `None` means the section
    /// must be absent.
    fn entropy_case(self) -> Option<EntropyCase> {
        match self {
            Self::IsentropicSmooth => Some(EntropyCase::Isentropic),
            Self::PowerEntropySmooth => Some(EntropyCase::Power),
            Self::ExponentialEntropySmooth => Some(EntropyCase::Exponential),
            _ => None,
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl PresetSection {
    pub fn validate(&self, gas: &GasModel<f64>, bc: BoundaryCondition, entropy: Option<&EntropyProfile<f64>>) -> Result<()> {
        if !(self.rho0 > 0.0 && self.p0 > 0.0) {
            return Err(not_applicable("preset rho0 and p0 must be positive"));
        }
        if !(0.0..1.0).contains(&self.amplitude) {
            return Err(not_applicable("preset amplitude must lie in [0, 1)"));
        }
        if self.id == PresetId::GalileanSlab && (gas.n() != 0 || bc != BoundaryCondition::Periodic) {
            return Err(not_applicable("galilean-slab needs n = 0 and periodic boundaries"));
        }
        match (self.id.entropy_case(), entropy.map(EntropyProfile::case)) {
            (None, Some(_)) => Err(not_applicable(format!("preset {} takes no [entropy] section", self.id))),
            (Some(EntropyCase::Isentropic), None) => Ok(()),
            (Some(want), got) if got != Some(want) => Err(not_applicable(format!(
                "preset {} needs a {want:?} entropy profile, got {got:?}",
                self.id
            ))),
            _ => Ok(()),
        }
    }
}

/// Builds the mesh and the initial layer described by the configuration.
pub fn initial_state(cfg: &RunConfig) -> Result<(MassMesh<f64>, FlowState<f64>)> {
    let gas = cfg.gas_model()?;
    let mesh = cfg.mesh()?;
    let entropy = cfg.entropy_profile()?;
    let p = &cfg.preset;
    let (s0, len) = (cfg.mesh.s_min, cfg.mesh.s_max - cfg.mesh.s_min);
    let g = gas.gamma();
    let periodic = cfg.bc == BoundaryCondition::Periodic;
    let xi = move |s: f64| (s - s0) / len;
    let wave = move |s: f64| (2.0 * PI * xi(s)).sin();
    let (rho0, p0, amp, vel) = (p.rho0, p.p0, p.amplitude, p.velocity);
    let state = match p.id {
        PresetId::UniformStatic => {
            init_state(&FnProfile { rho: |_| rho0, u: |_| 0.0, p: |_| p0 }, &mesh, &gas, cfg.mesh.r_origin)?
        }
        PresetId::GalileanSlab => {
            init_state(&FnProfile { rho: |_| rho0, u: |_| vel, p: |_| p0 }, &mesh, &gas, cfg.mesh.r_origin)?
        }
        PresetId::SodLikeTwoState => {
            let mid = s0 + 0.5 * len;
            let rho = move |s: f64| if s < mid { rho0 } else { 0.125 * rho0 };
            let pr = move |s: f64| if s < mid { p0 } else { 0.1 * p0 };
            init_state(&FnProfile { rho, u: |_| 0.0, p: pr }, &mesh, &gas, cfg.mesh.r_origin)?
        }
        PresetId::IsentropicSmooth | PresetId::PowerEntropySmooth | PresetId::ExponentialEntropySmooth => {
            let profile = match entropy {
                Some(e) => e,
                None => EntropyProfile::constant(p0 / rho0.powf(g))?,
            };
            // surfaces entropy-domain errors before the closure has to swallow them
            for &s in &mesh.s_nodes {
                profile.value(s)?;
            }
            // walls reflect: density even and velocity odd about each end keep the solution smooth
            let rho = move |s: f64| {
                let w = if periodic { wave(s) } else { (2.0 * PI * xi(s)).cos() };
                rho0 * (1.0 + amp * w)
            };
            let u = move |s: f64| if periodic { vel * wave(s) } else { vel * (PI * xi(s)).sin() };
            let pr = move |s: f64| profile.value(s).unwrap_or(f64::NAN) * rho(s).powf(g);
            init_state(&FnProfile { rho, u, p: pr }, &mesh, &gas, cfg.mesh.r_origin)?
        }
    };
    Ok((mesh, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(preset: &str, extra: &str, n: u32, bc: &str) -> String {
        format!(
            "scheme = \"sp\"\nbc = \"{bc}\"\n[gas]\nn = {n}\ngamma = 1.4\n[mesh]\ncells = 16\ns_min = 0.5\ns_max = 1.5\nr_origin = 0.5\n[time]\nt_end = 0.1\ntau = 0.01\n[preset]\nid = \"{preset}\"\nvelocity = 0.2\n{extra}"
        )
    }

    #[test]
    fn every_preset_builds_a_positive_state() {
        let cases = [
            ("uniform-static", "", 1, "fixed-center"),
            ("galilean-slab", "", 0, "periodic"),
            ("isentropic-smooth", "", 2, "fixed-center"),
            ("power-entropy-smooth", "[entropy]\nkind = \"power\"\na0 = 1.0\nq = 1.5\n", 1, "fixed-center"),
            ("exponential-entropy-smooth", "[entropy]\nkind = \"exponential\"\na0 = 1.0\nq = 0.5\n", 0, "rigid-walls"),
            ("sod-like-two-state", "", 0, "rigid-walls"),
        ];
        for (id, extra, n, bc) in cases {
            let cfg = RunConfig::from_toml_str(&config(id, extra, n, bc)).unwrap_or_else(|e| panic!("{id}: {e}"));
            let (_, st) = initial_state(&cfg).unwrap();
            assert!(st.rho.iter().chain(&st.p).all(|&v| v > 0.0), "{id}");
        }
    }

    #[test]
    fn entropy_section_must_match_preset() {
        let bad = config("power-entropy-smooth", "", 0, "rigid-walls");
        assert!(RunConfig::from_toml_str(&bad).is_err());
        let bad = config("sod-like-two-state", "[entropy]\nkind = \"constant\"\na0 = 1.0\n", 0, "rigid-walls");
        assert!(RunConfig::from_toml_str(&bad).is_err());
        let bad = config("galilean-slab", "", 0, "rigid-walls");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn power_entropy_is_sampled_from_profile() {
        let cfg = RunConfig::from_toml_str(&config(
            "power-entropy-smooth",
            "[entropy]\nkind = \"power\"\na0 = 2.0\nq = 1.0\n",
            0,
            "rigid-walls",
        ))
        .unwrap();
        let (mesh, st) = initial_state(&cfg).unwrap();
        let gas = cfg.gas_model().unwrap();
        for (i, s) in st.entropy(&gas).into_iter().enumerate() {
            assert!((s - 2.0 * mesh.s_cell(i)).abs() < 1e-13);
        }
    }
}
