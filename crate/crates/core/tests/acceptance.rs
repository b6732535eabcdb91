//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use lagrangian_gas::io::verify::{run_suite, SuiteId, VerifyOptions};
use lagrangian_gas::io::{build_simulation, convergence, RunConfig};
use lagrangian_gas::monitors::{discrete_cl_residual, LawId, Monitor, StepPair};
use lagrangian_gas::symmetry::InvariantSet;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Periodic plane runs; a fixed center otherwise.
fn config(scheme: &str, n: u32, gamma: &str, cells: usize, time: &str) -> RunConfig {
    let bc = if n == 0 { "periodic" } else { "fixed-center" };
    let preset = smooth_preset(n);
    let text = format!(
        "scheme = \"{scheme}\"\nbc = \"{bc}\"\n[gas]\nn = {n}\n{gamma}\n[mesh]\ncells = {cells}\n[time]\n{time}\n[preset]\n{preset}\n"
    );
    RunConfig::from_toml_str(&text).unwrap_or_else(|e| panic!("bad acceptance config: {e}\n{text}"))
}

/// Around a fixed center a mass-coordinate velocity wave is not odd in `r`, so curved runs start
/// at rest and move from the density wave alone.
fn smooth_preset(n: u32) -> &'static str {
    if n == 0 {
        "id = \"isentropic-smooth\"\namplitude = 0.1\nvelocity = 0.1"
    } else {
        "id = \"isentropic-smooth\"\namplitude = 0.1\nvelocity = 0.0"
    }
}

fn conservation_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    for n in 0..3 {
        let cfg = config("sp", n, "gamma = 1.4", 200, "t_end = 1.0\ntau = 0.001");
        let mut sim = match build_simulation(&cfg) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        };
        let laws: Vec<LawId> = [LawId::Mass, LawId::Energy, LawId::Momentum, LawId::CenterOfMass]
            .into_iter()
            .filter(|l| l.check_applicable(sim.kind, &sim.gas).is_ok())
            .collect();
        let mut local = 0.0_f64;
        for _ in 0..200 {
            let out = match sim.advance(None) {
                Ok(o) => o,
                Err(e) => return outcome(false, format!("n={n}: {e}")),
            };
            for &law in &laws {
                let r = discrete_cl_residual(law, &out.old, &sim.state, &out.mesh, &sim.gas, sim.kind, &sim.cfg)
                    .expect("applicable law");
                local = r.iter().fold(local, |m, v| m.max(v.abs()));
            }
        }
        notes.push(format!("n={n}: {local:.1e}"));
        worst = worst.max(local);
    }
    let took = start.elapsed();
    outcome(
        worst <= 1e-11 && took < Duration::from_secs(10),
        format!("max per-step residual {worst:.2e} ({}), {:.2} s", notes.join(", "), took.as_secs_f64()),
    )
}

fn modified_scheme() -> Outcome {
    let mut worst = 0.0_f64;
    for n in 0..3 {
        let cfg = config("sp-modified", n, "gamma_star = true", 64, "t_end = 1.0\ntau = 0.002");
        let mut sim = build_simulation(&cfg).expect("valid setup");
        let mut mons = [Monitor::new(LawId::Additional1), Monitor::new(LawId::Additional2)];
        for _ in 0..100 {
            let out = match sim.advance(None) {
                Ok(o) => o,
                Err(e) => return outcome(false, format!("n={n}: {e}")),
            };
            let pair =
                StepPair { old: &out.old, new: &sim.state, mesh: &out.mesh, gas: &sim.gas, scheme: sim.kind, cfg: &sim.cfg };
            for m in &mut mons {
                m.observe(&pair).expect("applicable law");
                worst = worst.max(m.drift().abs());
            }
        }
    }
    outcome(worst <= 1e-10, format!("max relative drift of both additional totals {worst:.2e} over 100 steps, n=0,1,2"))
}

fn explicit_scheme() -> Outcome {
    let (mut ent, mut mass) = (0.0_f64, 0.0_f64);
    for n in 0..3 {
        let cfg = config("explicit-invariant", n, "gamma_star = true", 64, "t_end = 100.0\ntau = 0.0002");
        let mut sim = build_simulation(&cfg).expect("valid setup");
        let s0 = sim.state.entropy(&sim.gas);
        for _ in 0..500 {
            if let Err(e) = sim.advance(None) {
                return outcome(false, format!("n={n}: {e}"));
            }
            let s = sim.state.entropy(&sim.gas);
            ent = s.iter().zip(&s0).fold(ent, |m, (a, b)| m.max((a - b).abs() / b.abs()));
            mass = mass.max(sim.state.mass_consistency_error(&sim.mesh, &sim.gas));
        }
    }
    outcome(
        ent <= 1e-14 && mass <= 1e-13,
        format!("max relative change of p/rho^gamma {ent:.2e}, cell-mass identity {mass:.2e} over 500 steps, n=0,1,2"),
    )
}

fn suite_outcome(suite: SuiteId, filter: impl Fn(&str) -> bool, extra: Option<String>) -> Outcome {
    let rep = run_suite(suite, &VerifyOptions::default());
    let checks: Vec<_> = rep.checks.iter().filter(|c| filter(&c.name)).collect();
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let worst = checks.iter().filter(|c| c.tolerance > 0.0 && c.value <= c.tolerance).map(|c| c.value / c.tolerance).fold(0.0, f64::max);
    let mut detail = format!("{} checks, {} failed, worst value/tolerance {worst:.2e}", checks.len(), failed.len());
    if let Some(x) = extra {
        detail = format!("{detail}; {x}");
    }
    if !failed.is_empty() {
        detail = format!("{detail}; failing: {}", failed.join(" | "));
    }
    outcome(failed.is_empty() && !checks.is_empty(), detail)
}

fn invariant_sets() -> Outcome {
    let expected = [12, 16, 14, 15, 13];
    let cards: Vec<usize> = InvariantSet::ALL.iter().map(|s| s.cardinality()).collect();
    let mut o = suite_outcome(SuiteId::Invariants, |_| true, Some(format!("cardinalities {cards:?}")));
    o.pass &= cards == expected;
    o
}

fn convergence_orders() -> Outcome {
    let start = Instant::now();
    let mut cases = vec![
        ("sp", 0, "gamma = 1.4", 1.8),
        ("sp", 1, "gamma = 1.4", 1.8),
        ("sp", 2, "gamma = 5.0 / 3.0", 1.8),
    ];
    for n in 0..3 {
        cases.push(("explicit-invariant", n, "gamma_star = true", 0.9));
    }
    let mut pass = true;
    let mut notes = Vec::new();
    for (scheme, n, gamma, need) in cases {
        let gamma = if gamma.contains('/') { "gamma = 1.6666666666666667" } else { gamma };
        let cfg = config(scheme, n, gamma, 25, "t_end = 0.1\ntau = 0.004");
        match convergence(&cfg, 4) {
            Ok(t) => {
                let ord = t.min_order().unwrap_or(f64::NAN);
                pass &= ord >= need;
                notes.push(format!("{scheme} n={n}: {ord:.3}"));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{scheme} n={n}: {e}"));
            }
        }
    }
    let took = start.elapsed();
    outcome(pass && took < Duration::from_secs(120), format!("min observed orders [{}], {:.1} s", notes.join(", "), took.as_secs_f64()))
}

type Criterion = (u32, &'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "conservation suite", Box::new(conservation_suite)),
        (2, "modified-scheme additional laws", Box::new(modified_scheme)),
        (3, "explicit invariant scheme", Box::new(explicit_scheme)),
        (4, "Noether identity checker", Box::new(|| suite_outcome(SuiteId::Noether, |_| true, None))),
        (5, "Eulerian conversion", Box::new(|| suite_outcome(SuiteId::EulerianConversion, |_| true, None))),
        (6, "invariant sets", Box::new(invariant_sets)),
        (7, "invariance verdicts", Box::new(|| suite_outcome(SuiteId::SchemeInvariance, |n| !n.starts_with("orthogonality"), None))),
        (8, "orthogonality criterion", Box::new(|| suite_outcome(SuiteId::SchemeInvariance, |n| n.starts_with("orthogonality"), None))),
        (9, "convergence orders", Box::new(convergence_orders)),
        (10, "inhomogeneous-law identities", Box::new(|| suite_outcome(SuiteId::Inhomogeneous, |_| true, None))),
    ];
    let mut failures = 0;
    for (id, name, run) in &criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id:>2} {name}: {}", o.detail);
        failures += usize::from(!o.pass);
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
