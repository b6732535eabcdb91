//! Numerical check of whether a scheme's equations survive a point transformation.

use serde::Serialize;

use super::generators::{Generator, Point};
use super::invariants::{explicit_direct_equations, sp_direct_equations, Equations};
use super::stencil::Stencil;
use crate::error::{argument, not_applicable, Result};
use crate::gas::{FlowState, GasModel, MassMesh};
use crate::num::Real;
use crate::schemes::{SchemeConfig, SchemeKind, Simulation};

/// Consecutive accepted steps of one scheme: `(old, new, mesh)` with `mesh` at the old time level.
#[derive(Debug, Clone)]
pub struct SolutionSegment<T> {
    pub scheme: SchemeKind,
    pub gas: GasModel<T>,
    pub cfg: SchemeConfig<T>,
    pub steps: Vec<(FlowState<T>, FlowState<T>, MassMesh<T>)>,
}

impl<T: Real> SolutionSegment<T> {
    /// Advances `sim` by `steps` steps and records them.
    pub fn record(sim: &mut Simulation<T>, steps: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            let o = sim.advance(None)?;
            out.push((o.old, sim.state.clone(), o.mesh));
        }
        Ok(Self {
            scheme: sim.kind,
            gas: sim.gas,
            cfg: sim.cfg,
            steps: out,
        })
    }

    /// Interior stencils of every recorded step.
    pub fn stencils(&self) -> Result<Vec<Stencil<T>>> {
        let mut out = Vec::new();
        for (old, new, mesh) in &self.steps {
            for i in 1..old.cells() {
                out.push(Stencil::from_layers(old, new, mesh, i)?);
            }
        }
        Ok(out)
    }
}

/// Outcome for one group parameter.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub scheme: String,
    pub generator: String,
    pub a: f64,
    /// Largest scaled residual of the scheme equations on the transformed stencils.
    pub max_residual: f64,
    /// Residual level of the untransformed segment.
    pub tol0: f64,
    /// `max_residual - tol0`.
    pub growth: f64,
    /// True when `max_residual <= 10 tol0`.
    pub verdict: bool,
}

/// Applies the finite flow of `gen` to a whole time layer.
///
/// Returns the transformed time, mass nodes and state. `eps` follows `p / rho`.
pub fn transform_layer<T: Real>(
    gen: &Generator,
    a: T,
    gas: &GasModel<T>,
    state: &FlowState<T>,
    t: T,
    s_nodes: &[T],
) -> Result<(T, Vec<T>, FlowState<T>)> {
    if s_nodes.len() != state.r.len() {
        return Err(argument("mass nodes and state disagree on the number of nodes"));
    }
    let n = gas.n();
    let half = T::lit(0.5);
    let mut out = state.clone();
    let mut s_out = s_nodes.to_vec();
    let mut t_out = t;
    for i in 0..state.r.len() {
        let y = gen.flow(
            n,
            a,
            &Point { t, s: s_nodes[i], r: state.r[i], u: state.u[i], rho: T::one(), p: T::one() },
        )?;
        t_out = y.t;
        s_out[i] = y.s;
        out.r[i] = y.r;
        out.u[i] = y.u;
    }
    for i in 0..state.cells() {
        let s = half * (s_nodes[i] + s_nodes[i + 1]);
        let y = gen.flow(n, a, &Point { t, s, r: T::zero(), u: T::zero(), rho: state.rho[i], p: state.p[i] })?;
        out.eps[i] = state.eps[i] * (y.p / state.p[i]) / (y.rho / state.rho[i]);
        out.rho[i] = y.rho;
        out.p[i] = y.p;
    }
    Ok((t_out, s_out, out))
}

/// Scheme equations on a stencil, each with the characteristic scale used to normalise it.
fn scaled_equations<T: Real>(kind: SchemeKind, st: &Stencil<T>, gas: &GasModel<T>, alpha: T) -> Result<Vec<(T, T, T)>> {
    let c = (st.p / st.rho).sqrt();
    let (eqs, scales): (Equations<T>, [T; 4]) = match kind {
        SchemeKind::Sp => (
            sp_direct_equations(st, gas, alpha),
            [T::one() / st.rho, c, st.p / st.rho, st.tau() * c],
        ),
        SchemeKind::ExplicitInvariant => (explicit_direct_equations(st, gas), [T::zero(), c, T::zero(), st.tau() * c]),
        SchemeKind::SpModified => {
            return Err(not_applicable(
                "the modified equation of state couples neighbouring cells and has no single-stencil form",
            ))
        }
    };
    Ok(eqs.into_iter().zip(scales).map(|((l, r), k)| (l, r, k)).collect())
}

fn stencil_residual<T: Real>(kind: SchemeKind, st: &Stencil<T>, gas: &GasModel<T>, alpha: T) -> Result<T> {
    Ok(scaled_equations(kind, st, gas, alpha)?
        .into_iter()
        .map(|(l, r, k)| {
            let den = l.abs() + r.abs() + k;
            if den == T::zero() {
                T::zero()
            } else {
                (l - r).abs() / den
            }
        })
        .fold(T::zero(), T::max))
}

/// Transforms every interior stencil of the segment by `exp(aX)` for each `a` and re-evaluates
/// the scheme equations.
///
/// The tolerance `tol0` is the residual of the untransformed segment, floored at `1e4` machine
/// epsilons; a generator passes for a given `a` when the transformed residual stays within
/// `10 tol0`.
pub fn scheme_invariance_check<T: Real>(
    gen: &Generator,
    segment: &SolutionSegment<T>,
    a_list: &[T],
) -> Result<Vec<InvarianceReport>> {
    let gas = &segment.gas;
    if !gen.is_admitted(gas) {
        return Err(not_applicable(format!(
            "generator {} is not admitted for n={}, gamma={}",
            gen.id,
            gas.n(),
            gas.gamma()
        )));
    }
    let stencils = segment.stencils()?;
    if stencils.is_empty() {
        return Err(argument("segment has no interior stencils"));
    }
    let alpha = segment.cfg.alpha;
    let mut base = T::zero();
    for st in &stencils {
        base = base.max(stencil_residual(segment.scheme, st, gas, alpha)?);
    }
    let tol0 = base.max(T::epsilon() * T::lit(1e4));
    a_list
        .iter()
        .map(|&a| {
            let mut worst = T::zero();
            for st in &stencils {
                let moved = st.transform(gen, gas.n(), a)?;
                worst = worst.max(stencil_residual(segment.scheme, &moved, gas, alpha)?);
            }
            let max_residual = worst.to_f64_lossy();
            let tol0 = tol0.to_f64_lossy();
            Ok(InvarianceReport {
                scheme: segment.scheme.id().to_string(),
                generator: gen.id.id().to_string(),
                a: a.to_f64_lossy(),
                max_residual,
                tol0,
                growth: max_residual - tol0,
                verdict: max_residual <= 10.0 * tol0,
            })
        })
        .collect()
}
