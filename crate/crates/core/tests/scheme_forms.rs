//! The invariant-form equations hold wherever the direct equations hold on solver output.

use lagrangian_gas::io::{build_simulation, RunConfig};
use lagrangian_gas::symmetry::{
    compute_invariants, explicit_direct_equations, invariant_form_equations, max_relative_residual, sp_direct_equations,
    InvariantSet, Stencil,
};

const TOL: f64 = 1e-9;

/// Absolute differences below this count as round-off; some equations are exactly `0 = 0`.
const FLOOR: f64 = 1e-13;

fn worst(eqs: &[(f64, f64)]) -> f64 {
    eqs.iter().map(|&(l, r)| if (l - r).abs() <= FLOOR { 0.0 } else { max_relative_residual(&[(l, r)]) }).fold(0.0, f64::max)
}

fn config(scheme: &str, n: u32, gamma: &str) -> RunConfig {
    let bc = if n == 0 { "periodic" } else { "fixed-center" };
    let velocity = if n == 0 { 0.2 } else { 0.0 };
    let text = format!(
        "scheme = \"{scheme}\"\nbc = \"{bc}\"\n[gas]\nn = {n}\n{gamma}\n[mesh]\ncells = 24\n[time]\nt_end = 1.0\ntau = 0.002\n[preset]\nid = \"isentropic-smooth\"\namplitude = 0.2\nvelocity = {velocity}\n"
    );
    RunConfig::from_toml_str(&text).unwrap()
}

/// Steps a few times and returns the worst direct and invariant-form residuals over interior nodes.
fn residuals(cfg: &RunConfig, sets: &[InvariantSet]) -> (f64, f64) {
    let mut sim = build_simulation(cfg).unwrap();
    let (mut direct, mut inv_form) = (0.0_f64, 0.0_f64);
    for _ in 0..5 {
        let out = sim.advance(None).unwrap();
        // the node next to a fixed center sees r = 0 in its stencil, where radius ratios are undefined
        let first = if sim.gas.n() == 0 { 1 } else { 2 };
        for i in first..sim.state.cells() {
            let st = Stencil::from_layers(&out.old, &sim.state, &out.mesh, i).unwrap();
            let eqs = match cfg.scheme.id() {
                "explicit-invariant" => explicit_direct_equations(&st, &sim.gas),
                _ => sp_direct_equations(&st, &sim.gas, sim.cfg.alpha),
            };
            direct = direct.max(worst(&eqs));
            for &set in sets {
                let v = compute_invariants(&st, &sim.gas, set).unwrap();
                let eqs = invariant_form_equations(&v, &sim.gas, sim.cfg.alpha).unwrap();
                inv_form = inv_form.max(worst(&eqs));
            }
        }
    }
    (direct, inv_form)
}

#[test]
fn conservative_scheme_in_invariant_form() {
    for n in 0..3 {
        let mut sets = vec![InvariantSet::LagrGeneral16];
        if n == 0 {
            sets.push(InvariantSet::LagrN0_14);
        }
        let (d, i) = residuals(&config("sp", n, "gamma = 1.4"), &sets);
        assert!(d <= TOL, "n={n}: direct residual {d:e}");
        assert!(i <= TOL, "n={n}: invariant-form residual {i:e}");
    }
}

#[test]
fn explicit_scheme_in_invariant_form() {
    for n in 0..3 {
        let (d, i) = residuals(&config("explicit-invariant", n, "gamma_star = true"), &[InvariantSet::LagrGammaStar15]);
        assert!(d <= TOL, "n={n}: direct residual {d:e}");
        assert!(i <= TOL, "n={n}: invariant-form residual {i:e}");
    }
}
