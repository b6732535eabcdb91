use rand::Rng;

use super::generators::{Generator, Point};
use crate::error::{argument, domain, Result};
use crate::gas::{FlowState, MassMesh};
use crate::num::Real;

/// The 21 two-layer stencil variables around node `i`.
///
/// Node quantities sit at `s` and `s_plus`; the cell quantities `rho`, `p` belong to the cell
/// `i + 1/2` to the right of the node and the `_minus` ones to the cell `i - 1/2` on its left.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stencil<T> {
    pub t: T,
    pub t_hat: T,
    pub s: T,
    pub s_plus: T,
    pub s_minus: T,
    pub u: T,
    pub u_plus: T,
    pub u_hat: T,
    pub u_hat_plus: T,
    pub r: T,
    pub r_plus: T,
    pub r_hat: T,
    pub r_hat_plus: T,
    pub rho: T,
    pub rho_minus: T,
    pub rho_hat: T,
    pub rho_hat_minus: T,
    pub p: T,
    pub p_minus: T,
    pub p_hat: T,
    pub p_hat_minus: T,
}

/// Number of stencil variables.
pub const STENCIL_DIM: usize = 21;

impl<T: Real> Stencil<T> {
    #[inline]
    pub fn tau(&self) -> T {
        self.t_hat - self.t
    }

    #[inline]
    pub fn hs(&self) -> T {
        self.s_plus - self.s
    }

    #[inline]
    pub fn hs_minus(&self) -> T {
        self.s - self.s_minus
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau() > T::zero() && self.hs() > T::zero() && self.hs_minus() > T::zero()) {
            return Err(argument("stencil steps must be positive"));
        }
        let thermo = [
            self.rho,
            self.rho_minus,
            self.rho_hat,
            self.rho_hat_minus,
            self.p,
            self.p_minus,
            self.p_hat,
            self.p_hat_minus,
        ];
        if thermo.iter().any(|&v| !(v > T::zero())) {
            return Err(domain("stencil densities and pressures must be positive"));
        }
        Ok(())
    }

    /// Stencil at node `i` of a step; needs `1 <= i < N`.
    pub fn from_layers(old: &FlowState<T>, new: &FlowState<T>, mesh: &MassMesh<T>, i: usize) -> Result<Self> {
        let cells = old.cells();
        if i == 0 || i >= cells {
            return Err(argument(format!("stencil node {i} is not interior")));
        }
        Ok(Self {
            t: mesh.t,
            t_hat: mesh.t + mesh.tau,
            s: mesh.s_nodes[i],
            s_plus: mesh.s_nodes[i + 1],
            s_minus: mesh.s_nodes[i - 1],
            u: old.u[i],
            u_plus: old.u[i + 1],
            u_hat: new.u[i],
            u_hat_plus: new.u[i + 1],
            r: old.r[i],
            r_plus: old.r[i + 1],
            r_hat: new.r[i],
            r_hat_plus: new.r[i + 1],
            rho: old.rho[i],
            rho_minus: old.rho[i - 1],
            rho_hat: new.rho[i],
            rho_hat_minus: new.rho[i - 1],
            p: old.p[i],
            p_minus: old.p[i - 1],
            p_hat: new.p[i],
            p_hat_minus: new.p[i - 1],
        })
    }

    /// Applies the finite flow of `gen` to every stencil variable.
    pub fn transform(&self, gen: &Generator, n: u32, a: T) -> Result<Self> {
        let node = |t: T, s: T, r: T, u: T| gen.flow(n, a, &Point { t, s, r, u, rho: T::one(), p: T::one() });
        let cell = |t: T, rho: T, p: T| gen.flow(n, a, &Point { t, s: T::zero(), r: T::zero(), u: T::zero(), rho, p });
        let a0 = node(self.t, self.s, self.r, self.u)?;
        let a1 = node(self.t, self.s_plus, self.r_plus, self.u_plus)?;
        let b0 = node(self.t_hat, self.s, self.r_hat, self.u_hat)?;
        let b1 = node(self.t_hat, self.s_plus, self.r_hat_plus, self.u_hat_plus)?;
        let sm = node(self.t, self.s_minus, T::zero(), T::zero())?;
        let c0 = cell(self.t, self.rho, self.p)?;
        let c1 = cell(self.t, self.rho_minus, self.p_minus)?;
        let d0 = cell(self.t_hat, self.rho_hat, self.p_hat)?;
        let d1 = cell(self.t_hat, self.rho_hat_minus, self.p_hat_minus)?;
        Ok(Self {
            t: a0.t,
            t_hat: b0.t,
            s: a0.s,
            s_plus: a1.s,
            s_minus: sm.s,
            u: a0.u,
            u_plus: a1.u,
            u_hat: b0.u,
            u_hat_plus: b1.u,
            r: a0.r,
            r_plus: a1.r,
            r_hat: b0.r,
            r_hat_plus: b1.r,
            rho: c0.rho,
            rho_minus: c1.rho,
            rho_hat: d0.rho,
            rho_hat_minus: d1.rho,
            p: c0.p,
            p_minus: c1.p,
            p_hat: d0.p,
            p_hat_minus: d1.p,
        })
    }
}

impl Stencil<f64> {
    /// A generic positive stencil with non-zero velocities and `t_hat < 0.8`, so projective
    /// flows with `|a| <= 1` stay regular.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let vel = |rng: &mut R| sign(rng) * rng.gen_range(0.1..1.0);
        let t = rng.gen_range(0.05..0.5);
        let tau = rng.gen_range(0.01..0.3);
        let s = rng.gen_range(0.5..1.5);
        let r = rng.gen_range(0.5..1.5);
        let r_hat = r + rng.gen_range(-0.2..0.2);
        Self {
            t,
            t_hat: t + tau,
            s,
            s_plus: s + rng.gen_range(0.05..0.3),
            s_minus: s - rng.gen_range(0.05..0.3),
            u: vel(rng),
            u_plus: vel(rng),
            u_hat: vel(rng),
            u_hat_plus: vel(rng),
            r,
            r_plus: r + rng.gen_range(0.05..0.3),
            r_hat,
            r_hat_plus: r_hat + rng.gen_range(0.05..0.3),
            rho: rng.gen_range(0.5..2.0),
            rho_minus: rng.gen_range(0.5..2.0),
            rho_hat: rng.gen_range(0.5..2.0),
            rho_hat_minus: rng.gen_range(0.5..2.0),
            p: rng.gen_range(0.5..2.0),
            p_minus: rng.gen_range(0.5..2.0),
            p_hat: rng.gen_range(0.5..2.0),
            p_hat_minus: rng.gen_range(0.5..2.0),
        }
    }
}
