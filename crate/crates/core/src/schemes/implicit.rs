//! Implicit conservative scheme and its modified-closure variant.
//!
//! With the mass equation and the energy equation eliminated analytically, the only unknowns
//! left are the new node velocities `û`. The momentum residual couples each node to its two
//! neighbours, so every Newton correction is a (cyclic) tridiagonal solve.

use super::{
    check_inputs, r_factor, r_factor_dhat, solve_cyclic_tridiagonal, solve_tridiagonal,
    BoundaryCondition, SchemeConfig, StepReport,
};
use crate::error::{not_applicable, GasError, Result};
use crate::gas::{FlowState, GasModel, MassMesh};
use crate::num::{powi, Real};

/// How the new cell pressure follows from the new specific volume.
#[derive(Debug, Clone, Copy)]
enum Closure<T> {
    /// `ε̂ = p̂ / ((γ-1) ρ̂)` with pressure weight `alpha`.
    Polytropic { alpha: T },
    /// Modified discrete equation of state; the weighted pressure is the midpoint value.
    Midpoint,
}

/// New-layer cell quantities and the derivatives of the weighted pressure.
#[derive(Debug, Clone, Copy)]
struct Cell<T> {
    pw: T,
    d_left: T,
    d_right: T,
    v_hat: T,
    p_hat: T,
    eps_hat: T,
}

struct Layer<'a, T> {
    old: &'a FlowState<T>,
    gas: &'a GasModel<T>,
    hs: T,
    tau: T,
    bc: BoundaryCondition,
    closure: Closure<T>,
}

struct Eval<T> {
    f: Vec<T>,
    norm: T,
    cells: Vec<Cell<T>>,
    r_hat: Vec<T>,
}

/// Modified-closure geometric correction `g = r^{(0.5)} R - (r^{n+1})^{(0.5)}` and `dg/dr̂`.
fn geometric_defect<T: Real>(r: T, r_hat: T, n: u32) -> (T, T) {
    let d = r_hat - r;
    match n {
        0 => (T::zero(), T::zero()),
        1 => (-d * d / T::lit(4.0), -d / T::lit(2.0)),
        _ => {
            let third = T::one() / T::lit(3.0);
            (
                -d * d * (r_hat + r) * third,
                -(T::lit(2.0) * d * (r_hat + r) + d * d) * third,
            )
        }
    }
}

impl<'a, T: Real> Layer<'a, T> {
    fn nodes(&self) -> usize {
        self.old.r.len()
    }

    fn cell(&self, c: usize, uh: &[T], rh: &[T]) -> Option<Cell<T>> {
        let n = self.gas.n();
        let half = T::lit(0.5);
        let g1 = self.gas.gamma() - T::one();
        let old = self.old;
        let (l, r) = (c, c + 1);
        let w_l = half * (old.u[l] + uh[l]);
        let w_r = half * (old.u[r] + uh[r]);
        let big_l = r_factor(old.r[l], rh[l], n);
        let big_r = r_factor(old.r[r], rh[r], n);
        let v = T::one() / old.rho[c];
        let dv = self.tau * (big_r * w_r - big_l * w_l) / self.hs;
        let v_hat = v + dv;
        if !(v_hat > T::zero()) {
            return None;
        }
        // dv̂/dû at the two nodes
        let k = half * self.tau / self.hs;
        let dv_l = -powi(rh[l], n) * k;
        let dv_r = powi(rh[r], n) * k;
        let (p, eps) = (old.p[c], old.eps[c]);
        match self.closure {
            Closure::Polytropic { alpha } => {
                let num = eps - (T::one() - alpha) * p * dv;
                let den = v_hat / g1 + alpha * dv;
                if !(den > T::zero()) || !(num > T::zero()) {
                    return None;
                }
                let p_hat = num / den;
                let dp_dv = (-(T::one() - alpha) * p * den - num * (T::one() / g1 + alpha)) / (den * den);
                let pw = alpha * p_hat + (T::one() - alpha) * p;
                Some(Cell {
                    pw,
                    d_left: alpha * dp_dv * dv_l,
                    d_right: alpha * dp_dv * dv_r,
                    v_hat,
                    p_hat,
                    eps_hat: p_hat * v_hat / g1,
                })
            }
            Closure::Midpoint => {
                let du_l = uh[l] - old.u[l];
                let du_r = uh[r] - old.u[r];
                let sixteenth = T::lit(1.0 / 16.0);
                let num = eps + (du_l * du_l + du_r * du_r) * sixteenth;
                let (g_l, dg_l) = geometric_defect(old.r[l], rh[l], n);
                let (g_r, dg_r) = geometric_defect(old.r[r], rh[r], n);
                let big_g = (g_r - g_l) / self.hs;
                let cv = half + half / g1;
                let den = half * dv + half * (v_hat + v) / g1 + half * big_g;
                if !(den > T::zero()) {
                    return None;
                }
                let pw = num / den;
                let p_hat = T::lit(2.0) * pw - p;
                if !(pw > T::zero()) || !(p_hat > T::zero()) {
                    return None;
                }
                let dden_l = cv * dv_l - half * dg_l * k;
                let dden_r = cv * dv_r + half * dg_r * k;
                let eighth = T::lit(0.125);
                Some(Cell {
                    pw,
                    d_left: (du_l * eighth - pw * dden_l) / den,
                    d_right: (du_r * eighth - pw * dden_r) / den,
                    v_hat,
                    p_hat,
                    eps_hat: eps - pw * dv,
                })
            }
        }
    }

    /// Momentum residual in rate form, `(û - u)/τ + R (P_+ - P_-)/h`, at every node.
    fn eval(&self, uh: &[T]) -> Option<Eval<T>> {
        let nodes = self.nodes();
        let cells_n = nodes - 1;
        let old = self.old;
        let half = T::lit(0.5);
        let r_hat: Vec<T> = (0..nodes)
            .map(|i| old.r[i] + self.tau * half * (old.u[i] + uh[i]))
            .collect();
        let mut cells = Vec::with_capacity(cells_n);
        for c in 0..cells_n {
            cells.push(self.cell(c, uh, &r_hat)?);
        }
        let n = self.gas.n();
        let mut f = vec![T::zero(); nodes];
        let mut norm = T::zero();
        let active = if self.bc == BoundaryCondition::Periodic { cells_n } else { nodes };
        for i in 0..active {
            f[i] = match self.bc.pinned_velocity(i, nodes, old.u[i]) {
                Some(target) => (uh[i] - target) / self.tau,
                None => {
                    let (cl, cr) = self.bc.neighbours(i, cells_n);
                    let (cl, cr) = (cl?, cr?);
                    (uh[i] - old.u[i]) / self.tau
                        + r_factor(old.r[i], r_hat[i], n) * (cells[cr].pw - cells[cl].pw) / self.hs
                }
            };
            if !f[i].is_finite() {
                return None;
            }
            norm = norm.max(f[i].abs());
        }
        Some(Eval { f, norm, cells, r_hat })
    }

    /// Newton correction `δ` solving `J δ = -f` over the active unknowns.
    fn newton_direction(&self, ev: &Eval<T>) -> Result<Vec<T>> {
        let nodes = self.nodes();
        let cells_n = nodes - 1;
        let periodic = self.bc == BoundaryCondition::Periodic;
        let m = if periodic { cells_n } else { nodes };
        let n = self.gas.n();
        let half = T::lit(0.5);
        let inv_tau = T::one() / self.tau;
        let mut a = vec![T::zero(); m];
        let mut b = vec![T::zero(); m];
        let mut c = vec![T::zero(); m];
        let mut d = vec![T::zero(); m];
        for i in 0..m {
            d[i] = -ev.f[i];
            if self.bc.pinned_velocity(i, nodes, self.old.u[i]).is_some() {
                b[i] = inv_tau;
                continue;
            }
            let (cl, cr) = self.bc.neighbours(i, cells_n);
            let (cl, cr) = (cl.expect("free node has a left cell"), cr.expect("free node has a right cell"));
            let (left, right) = (ev.cells[cl], ev.cells[cr]);
            let r_old = self.old.r[i];
            let rh = ev.r_hat[i];
            let big = r_factor(r_old, rh, n);
            let dbig = r_factor_dhat(r_old, rh, n) * half * self.tau;
            let dp = right.pw - left.pw;
            b[i] = inv_tau + (dbig * dp + big * (right.d_left - left.d_right)) / self.hs;
            a[i] = -big * left.d_left / self.hs;
            c[i] = big * right.d_right / self.hs;
        }
        if periodic {
            solve_cyclic_tridiagonal(&a, &b, &c, &d)
        } else {
            solve_tridiagonal(&a, &b, &c, &d)
        }
    }

    fn apply(&self, uh: &[T], delta: &[T], lambda: T) -> Vec<T> {
        let mut out = uh.to_vec();
        for (o, dlt) in out.iter_mut().zip(delta) {
            *o = *o + lambda * *dlt;
        }
        if self.bc == BoundaryCondition::Periodic {
            let last = out.len() - 1;
            out[last] = out[0];
        }
        out
    }

    /// Explicit predictor with `R = r^n` and old pressures.
    fn predictor(&self) -> Vec<T> {
        let old = self.old;
        let nodes = self.nodes();
        let n = self.gas.n();
        let mut uh: Vec<T> = (0..nodes)
            .map(|i| match self.bc.pinned_velocity(i, nodes, old.u[i]) {
                Some(t) => t,
                None => {
                    let (pl, pr) = self.bc.around(i, &old.p);
                    old.u[i] - self.tau * powi(old.r[i], n) * (pr - pl) / self.hs
                }
            })
            .collect();
        if self.bc == BoundaryCondition::Periodic {
            uh[nodes - 1] = uh[0];
        }
        uh
    }

    fn fixed_point(&self, mut uh: Vec<T>, max_iter: usize, tol: T) -> Result<(Vec<T>, Eval<T>, usize)> {
        let mut ev = self.eval(&uh).ok_or_else(|| positivity_failure(0, T::nan()))?;
        for it in 1..=max_iter {
            if ev.norm <= tol {
                return Ok((uh, ev, it));
            }
            let step: Vec<T> = ev.f.iter().map(|&fi| -self.tau * fi).collect();
            uh = self.apply(&uh, &step, T::one());
            ev = self.eval(&uh).ok_or_else(|| positivity_failure(it, ev.norm))?;
        }
        if ev.norm <= tol {
            return Ok((uh, ev, max_iter));
        }
        Err(GasError::StepFailure {
            reason: "fixed-point fallback did not converge".into(),
            iterations: max_iter,
            residual: ev.norm.to_f64_lossy(),
        })
    }

    fn solve(&self, cfg: &SchemeConfig<T>) -> Result<(FlowState<T>, StepReport<T>)> {
        let tol = cfg.newton_tol;
        let mut uh = self.predictor();
        let mut ev = match self.eval(&uh) {
            Some(ev) => ev,
            None => {
                uh = self.old.u.clone();
                self.eval(&uh).ok_or_else(|| positivity_failure(0, T::nan()))?
            }
        };
        let mut failures = 0usize;
        let mut iterations = 0usize;
        let mut fallback = false;
        while ev.norm > tol {
            if iterations >= cfg.newton_max_iter {
                return Err(GasError::StepFailure {
                    reason: "Newton iteration limit reached".into(),
                    iterations,
                    residual: ev.norm.to_f64_lossy(),
                });
            }
            iterations += 1;
            let delta = self.newton_direction(&ev)?;
            let mut lambda = T::one();
            let mut accepted = None;
            let mut last_valid = None;
            for _ in 0..8 {
                let trial = self.apply(&uh, &delta, lambda);
                if let Some(tev) = self.eval(&trial) {
                    if tev.norm < ev.norm {
                        accepted = Some((trial, tev));
                        break;
                    }
                    last_valid = Some((trial, tev));
                }
                lambda = lambda * T::lit(0.5);
            }
            match accepted {
                Some((trial, tev)) => {
                    uh = trial;
                    ev = tev;
                }
                None => {
                    failures += 1;
                    if failures >= 3 {
                        fallback = true;
                        let (u2, e2, its) = self.fixed_point(uh, 4 * cfg.newton_max_iter, tol)?;
                        uh = u2;
                        ev = e2;
                        iterations += its;
                        break;
                    }
                    if let Some((trial, tev)) = last_valid {
                        uh = trial;
                        ev = tev;
                    }
                }
            }
        }
        // one polishing correction pushes the residual from the tolerance down to roundoff
        if ev.norm > T::zero() {
            if let Ok(delta) = self.newton_direction(&ev) {
                let trial = self.apply(&uh, &delta, T::one());
                if let Some(tev) = self.eval(&trial) {
                    if tev.norm <= ev.norm {
                        uh = trial;
                        ev = tev;
                        iterations += 1;
                    }
                }
            }
        }
        let new = self.assemble(uh, ev.r_hat, &ev.cells)?;
        let report = StepReport {
            iterations,
            residual: ev.norm,
            tau: self.tau,
            fallback,
        };
        Ok((new, report))
    }

    fn assemble(&self, uh: Vec<T>, r_hat: Vec<T>, cells: &[Cell<T>]) -> Result<FlowState<T>> {
        if r_hat.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(positivity_failure(0, T::nan()));
        }
        Ok(FlowState {
            r: r_hat,
            u: uh,
            rho: cells.iter().map(|c| T::one() / c.v_hat).collect(),
            p: cells.iter().map(|c| c.p_hat).collect(),
            eps: cells.iter().map(|c| c.eps_hat).collect(),
        })
    }
}

fn positivity_failure<T: Real>(iterations: usize, residual: T) -> GasError {
    GasError::StepFailure {
        reason: "positivity lost in the new layer".into(),
        iterations,
        residual: residual.to_f64_lossy(),
    }
}

fn check_periodic<T: Real>(state: &FlowState<T>, bc: BoundaryCondition) -> Result<()> {
    if bc == BoundaryCondition::Periodic {
        let last = state.u.len() - 1;
        let scale = state.u[0].abs().max(T::one());
        if (state.u[last] - state.u[0]).abs() > T::lit(1e-12) * scale {
            return Err(GasError::Argument("periodic state must have u_N = u_0".into()));
        }
    }
    Ok(())
}

/// One step of the conservative implicit scheme with the polytropic closure at weight `cfg.alpha`.
pub fn sp_step<T: Real>(
    state: &FlowState<T>,
    mesh: &MassMesh<T>,
    gas: &GasModel<T>,
    cfg: &SchemeConfig<T>,
) -> Result<(FlowState<T>, StepReport<T>)> {
    check_inputs(state, gas, cfg)?;
    check_periodic(state, cfg.bc)?;
    Layer {
        old: state,
        gas,
        hs: mesh.hs,
        tau: mesh.tau,
        bc: cfg.bc,
        closure: Closure::Polytropic { alpha: cfg.alpha },
    }
    .solve(cfg)
}

/// One step with the modified discrete equation of state. The pressure weight is fixed to the
/// midpoint value, so `cfg.alpha` is ignored; the stored `p̂` satisfies `(p̂ + p)/2 = p^{(0.5)}`.
pub fn sp_step_modified<T: Real>(
    state: &FlowState<T>,
    mesh: &MassMesh<T>,
    gas: &GasModel<T>,
    cfg: &SchemeConfig<T>,
) -> Result<(FlowState<T>, StepReport<T>)> {
    if !gas.is_gamma_star() {
        return Err(not_applicable(format!(
            "modified closure requires gamma = {}, got {}",
            gas.gamma_star(),
            gas.gamma()
        )));
    }
    check_inputs(state, gas, cfg)?;
    check_periodic(state, cfg.bc)?;
    Layer {
        old: state,
        gas,
        hs: mesh.hs,
        tau: mesh.tau,
        bc: cfg.bc,
        closure: Closure::Midpoint,
    }
    .solve(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{init_state, FnProfile};

    fn layer_fixture(n: u32, closure: Closure<f64>) -> (FlowState<f64>, GasModel<f64>, MassMesh<f64>) {
        let gas = if matches!(closure, Closure::Midpoint) {
            GasModel::with_gamma_star(n).unwrap()
        } else {
            GasModel::new(n, 1.4).unwrap()
        };
        let mesh = MassMesh::uniform(0.0, 1.0, 12, 0.0, 0.01).unwrap();
        let prof = FnProfile {
            rho: |s: f64| 1.0 + 0.2 * (2.0 * s).cos(),
            u: |s: f64| 0.3 * (std::f64::consts::PI * s).sin(),
            p: |s: f64| 1.0 + 0.1 * s,
        };
        let r0 = if n == 0 { 0.0 } else { 0.5 };
        (init_state(&prof, &mesh, &gas, r0).unwrap(), gas, mesh)
    }

    /// Closed-form Jacobian against central differences of the residual.
    #[test]
    fn jacobian_matches_finite_differences() {
        for n in 0..3 {
            for closure in [Closure::Polytropic { alpha: 0.3 }, Closure::Midpoint] {
                let bc = BoundaryCondition::RigidWalls;
                let (st, gas, mesh) = layer_fixture(n, closure);
                let layer = Layer { old: &st, gas: &gas, hs: mesh.hs, tau: 0.02, bc, closure };
                let uh: Vec<f64> = st.u.iter().enumerate().map(|(i, u)| u * 0.9 + 0.01 * i as f64).collect();
                let ev = layer.eval(&uh).unwrap();
                let nodes = uh.len();
                let h = 1e-7;
                for j in 1..nodes - 1 {
                    let mut up = uh.clone();
                    let mut dn = uh.clone();
                    up[j] += h;
                    dn[j] -= h;
                    let fp = layer.eval(&up).unwrap().f;
                    let fm = layer.eval(&dn).unwrap().f;
                    // J e_j via the solver: J^{-1} (J e_j) = e_j, i.e. solve with f = -(J e_j)
                    let col: Vec<f64> = (0..nodes).map(|i| (fp[i] - fm[i]) / (2.0 * h)).collect();
                    let fake = Eval { f: col.iter().map(|v| -v).collect(), norm: 1.0, cells: ev.cells.clone(), r_hat: ev.r_hat.clone() };
                    let e = layer.newton_direction(&fake).unwrap();
                    for (i, v) in e.iter().enumerate() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((v - want).abs() < 1e-5, "n={n} {closure:?} col {j} row {i}: {v}");
                    }
                }
            }
        }
    }
}
