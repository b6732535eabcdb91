//! Finite-difference invariant sets and the scheme equations written in terms of them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::generators::{Frame, Generator, GeneratorId};
use super::stencil::{Stencil, STENCIL_DIM};
use crate::error::{argument, not_applicable, Result};
use crate::gas::GasModel;
use crate::num::{guarded_ratio, powi, Real};
use crate::schemes::r_factor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantSet {
    /// Eulerian stencil, plane flow, six symmetries.
    Euler12,
    /// Lagrangian stencil, any `n` and `gamma`.
    LagrGeneral16,
    /// Lagrangian stencil, plane flow.
    LagrN0_14,
    /// Lagrangian stencil, special exponent.
    LagrGammaStar15,
    /// Lagrangian stencil, plane flow with `gamma = 3`.
    LagrN0Gamma3_13,
}

impl InvariantSet {
    pub const ALL: [InvariantSet; 5] = [
        Self::Euler12,
        Self::LagrGeneral16,
        Self::LagrN0_14,
        Self::LagrGammaStar15,
        Self::LagrN0Gamma3_13,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Euler12 => "euler-12",
            Self::LagrGeneral16 => "lagr-general-16",
            Self::LagrN0_14 => "lagr-n0-14",
            Self::LagrGammaStar15 => "lagr-gamma-star-15",
            Self::LagrN0Gamma3_13 => "lagr-n0-gamma3-13",
        }
    }

    pub fn cardinality(self) -> usize {
        match self {
            Self::Euler12 => 12,
            Self::LagrGeneral16 => 16,
            Self::LagrN0_14 => 14,
            Self::LagrGammaStar15 => 15,
            Self::LagrN0Gamma3_13 => 13,
        }
    }

    /// Stencil variables the set is built on; the Eulerian stencil has no mass coordinates.
    pub fn stencil_dim(self) -> usize {
        match self {
            Self::Euler12 => STENCIL_DIM - 3,
            _ => STENCIL_DIM,
        }
    }

    pub fn check_applicable<T: Real>(self, gas: &GasModel<T>) -> Result<()> {
        let ok = match self {
            Self::Euler12 | Self::LagrN0_14 => gas.n() == 0,
            Self::LagrGeneral16 => true,
            Self::LagrGammaStar15 => gas.is_gamma_star(),
            Self::LagrN0Gamma3_13 => gas.n() == 0 && gas.is_gamma_star(),
        };
        if ok {
            Ok(())
        } else {
            Err(not_applicable(format!(
                "invariant set {} does not apply to n={}, gamma={}",
                self.id(),
                gas.n(),
                gas.gamma()
            )))
        }
    }

    /// Symmetries the set is invariant under.
    pub fn generators(self) -> Vec<Generator> {
        use GeneratorId::*;
        let ids: &[GeneratorId] = match self {
            Self::Euler12 => &[X1, X2, X3, X4, SpaceTranslation, Galilean],
            Self::LagrGeneral16 => &[X1, X2, X3, X4, X0],
            Self::LagrN0_14 => &[X1, X2, X3, X4, X0, SpaceTranslation, Galilean],
            Self::LagrGammaStar15 => &[X1, X2, X3, X4, X0, Projective],
            Self::LagrN0Gamma3_13 => &[X1, X2, X3, X4, X0, SpaceTranslation, Galilean, Projective],
        };
        let frame = if self == Self::Euler12 { Frame::Eulerian } else { Frame::Lagrangian };
        ids.iter().map(|&id| Generator { id, frame }).collect()
    }
}

impl fmt::Display for InvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for InvariantSet {
    type Err = crate::GasError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| argument(format!("unknown invariant set '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantVector<T> {
    pub set: InvariantSet,
    /// `values[k]` is invariant number `k + 1`.
    pub values: Vec<T>,
    /// Indices whose evaluation was not finite (undefined ratios at non-generic points).
    pub flagged: Vec<usize>,
}

/// Evaluates every member of the chosen invariant set on the stencil.
pub fn compute_invariants<T: Real>(st: &Stencil<T>, gas: &GasModel<T>, set: InvariantSet) -> Result<InvariantVector<T>> {
    set.check_applicable(gas)?;
    let n = gas.n();
    let q = guarded_ratio::<T>;
    let tau = st.tau();
    let h = st.hs();
    let half = T::lit(0.5);
    let sq = |x: T| x.sqrt();
    let values = match set {
        InvariantSet::Euler12 => {
            let hp = st.r_plus - st.r;
            let hhp = st.r_hat_plus - st.r_hat;
            let k = sq(st.rho / st.p);
            vec![
                q(hhp, hp),
                tau / hp * sq(st.p / st.rho),
                k * ((st.r_hat - st.r) / tau - st.u),
                k * (st.u_plus - st.u),
                k * (st.u_hat - st.u),
                k * (st.u_hat_plus - st.u_hat),
                q(st.p_minus, st.p),
                q(st.p_hat, st.p),
                q(st.p_hat_minus, st.p_hat),
                q(st.rho_hat, st.rho),
                q(st.rho_hat_minus, st.rho_hat),
                q(st.rho_minus, st.rho_hat),
            ]
        }
        InvariantSet::LagrGeneral16 => vec![
            q(st.hs_minus(), h),
            st.rho * powi(st.r, n + 1) / h,
            tau / h * powi(st.r, n) * sq(st.rho * st.p),
            tau * st.u / st.r,
            q(st.u_plus, st.u),
            q(st.u_hat, st.u),
            q(st.u_hat_plus, st.u_hat),
            q(st.r_plus, st.r),
            q(st.r_hat, st.r),
            q(st.r_hat_plus, st.r_hat),
            q(st.rho_minus, st.rho),
            q(st.rho_hat, st.rho),
            q(st.rho_hat_minus, st.rho_hat),
            q(st.p_minus, st.p),
            q(st.p_hat, st.p),
            q(st.p_hat_minus, st.p_hat),
        ],
        InvariantSet::LagrN0_14 => {
            let k = sq(st.rho / st.p);
            let w = (st.r_hat - st.r) / tau;
            vec![
                q(st.hs_minus(), h),
                tau / h * sq(st.rho * st.p),
                k * (w - st.u),
                k * (w - st.u_hat),
                k * (st.u_plus - st.u),
                k * (st.u_hat_plus - st.u_hat),
                st.rho * (st.r_plus - st.r) / h,
                st.rho_hat * (st.r_hat_plus - st.r_hat) / h,
                q(st.rho_minus, st.rho),
                q(st.rho_hat, st.rho),
                q(st.rho_hat_minus, st.rho_hat),
                q(st.p_minus, st.p),
                q(st.p_hat, st.p),
                q(st.p_hat_minus, st.p_hat),
            ]
        }
        InvariantSet::LagrGammaStar15 => {
            let np1 = gas.np1();
            let gs = gas.gamma_star();
            vec![
                q(st.hs_minus(), h),
                st.rho * powi(st.r, n + 1) / h,
                st.rho_hat * powi(st.r_hat, n + 1) / h,
                tau * powi(st.r, n) / h
                    * st.rho.powf(half - T::one() / np1)
                    * st.rho_hat.powf(T::one() / np1)
                    * sq(st.p),
                st.p_hat / st.p * (st.rho / st.rho_hat).powf(gs),
                (st.r + tau * st.u) / st.r_hat,
                (st.r_plus + tau * st.u_plus) / st.r_hat_plus,
                (st.r_hat - tau * st.u_hat) / st.r,
                (st.r_hat_plus - tau * st.u_hat_plus) / st.r_plus,
                q(st.r_plus, st.r),
                q(st.r_hat_plus, st.r_hat),
                q(st.rho_minus, st.rho),
                q(st.rho_hat_minus, st.rho_hat),
                q(st.p_minus, st.p),
                q(st.p_hat_minus, st.p_hat),
            ]
        }
        InvariantSet::LagrN0Gamma3_13 => {
            let k = sq(st.rho / st.p);
            let kh = sq(st.rho_hat / st.p_hat);
            let w = (st.r_hat - st.r) / tau;
            let ratio = st.rho / st.rho_hat;
            vec![
                q(st.hs_minus(), h),
                tau / h * (st.rho * st.p * st.rho_hat * st.p_hat).powf(T::lit(0.25)),
                k * (w - st.u),
                kh * (w - st.u_hat),
                k * ((st.r_plus - st.r) / tau + st.u_plus - st.u),
                kh * (-(st.r_hat_plus - st.r_hat) / tau + st.u_hat_plus - st.u_hat),
                st.rho * (st.r_plus - st.r) / h,
                st.rho_hat * (st.r_hat_plus - st.r_hat) / h,
                st.p_hat / st.p * ratio * ratio * ratio,
                q(st.rho_minus, st.rho),
                q(st.rho_hat_minus, st.rho_hat),
                q(st.p_minus, st.p),
                q(st.p_hat_minus, st.p_hat),
            ]
        }
    };
    debug_assert_eq!(values.len(), set.cardinality());
    let flagged = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_finite())
        .map(|(k, _)| k)
        .collect();
    Ok(InvariantVector { set, values, flagged })
}

/// A scheme written as equations `lhs = rhs`.
pub type Equations<T> = Vec<(T, T)>;

/// `|lhs - rhs| / (|lhs| + |rhs|)`, zero when both sides vanish.
pub fn relative_residual<T: Real>(lhs: T, rhs: T) -> T {
    let den = lhs.abs() + rhs.abs();
    if den == T::zero() {
        T::zero()
    } else {
        (lhs - rhs).abs() / den
    }
}

/// Largest [`relative_residual`] of a set of equations.
pub fn max_relative_residual<T: Real>(eqs: &[(T, T)]) -> T {
    eqs.iter()
        .map(|&(l, r)| relative_residual(l, r))
        .fold(T::zero(), T::max)
}

/// Implicit conservative scheme (polytropic closure) in direct form on a stencil:
/// mass (cell `i+1/2`), momentum (node `i`), energy (cell `i+1/2`), trajectory (node `i`).
pub fn sp_direct_equations<T: Real>(st: &Stencil<T>, gas: &GasModel<T>, alpha: T) -> Equations<T> {
    let n = gas.n();
    let half = T::lit(0.5);
    let one = T::one();
    let (tau, h) = (st.tau(), st.hs());
    let big = r_factor(st.r, st.r_hat, n);
    let big_p = r_factor(st.r_plus, st.r_hat_plus, n);
    let w = half * (st.u + st.u_hat);
    let w_p = half * (st.u_plus + st.u_hat_plus);
    let pw = alpha * st.p_hat + (one - alpha) * st.p;
    let pw_m = alpha * st.p_hat_minus + (one - alpha) * st.p_minus;
    let dv = one / st.rho_hat - one / st.rho;
    vec![
        (dv, tau * (big_p * w_p - big * w) / h),
        (st.u_hat - st.u, -tau * big * (pw - pw_m) / h),
        ((st.p_hat / st.rho_hat - st.p / st.rho) / (gas.gamma() - one), -pw * dv),
        (st.r_hat - st.r, tau * w),
    ]
}

/// Explicit invariant scheme in direct form: mass identity, momentum, pathline entropy, trajectory.
pub fn explicit_direct_equations<T: Real>(st: &Stencil<T>, gas: &GasModel<T>) -> Equations<T> {
    let n = gas.n();
    let gamma = gas.gamma();
    let (tau, h) = (st.tau(), st.hs());
    let np1 = n + 1;
    vec![
        (
            st.rho_hat * (powi(st.r_hat_plus, np1) - powi(st.r_hat, np1)),
            st.rho * (powi(st.r_plus, np1) - powi(st.r, np1)),
        ),
        (
            st.u_hat - st.u,
            -tau * (st.rho_hat / st.rho).powf(T::lit(2.0) / gas.np1()) * powi(st.r, n) * (st.p - st.p_minus) / h,
        ),
        (st.p_hat / st.rho_hat.powf(gamma), st.p / st.rho.powf(gamma)),
        (st.r_hat - st.r, tau * st.u),
    ]
}

/// Scheme equations expressed through an invariant vector.
///
/// `Sp` needs the general or plane-flow set, `Explicit` the special-exponent sets.
pub fn invariant_form_equations<T: Real>(
    inv: &InvariantVector<T>,
    gas: &GasModel<T>,
    alpha: T,
) -> Result<Equations<T>> {
    let v = |k: usize| inv.values[k - 1];
    let one = T::one();
    let half = T::lit(0.5);
    let n = gas.n();
    let g1 = gas.gamma() - one;
    Ok(match inv.set {
        InvariantSet::LagrGeneral16 => {
            // R/r^n and R_+/r^n as functions of the radius ratios
            let a0 = r_factor(one, v(9), n);
            let a1 = r_factor(v(8), v(9) * v(10), n);
            let flux = a1 * (v(6) * v(7) + v(5)) * half - a0 * (v(6) + one) * half;
            let i24 = v(2) * v(4);
            vec![
                (one / v(12) - one, i24 * flux),
                (
                    v(6) - one,
                    -(v(3) * v(3) / i24) * a0 * (alpha * v(15) * (one - v(16)) + (one - alpha) * (one - v(14))),
                ),
                ((v(15) / v(12) - one) / g1, -i24 * (alpha * v(15) + (one - alpha)) * flux),
                (v(9) - one, half * v(4) * (one + v(6))),
            ]
        }
        InvariantSet::LagrN0_14 => vec![
            (one / v(10) - one, v(2) * (v(5) + v(6)) * half),
            (
                v(3) - v(4),
                -v(2) * (alpha * (v(13) - v(13) * v(14)) + (one - alpha) * (one - v(12))),
            ),
            ((v(13) / v(10) - one) / g1, -v(2) * (alpha * v(13) + (one - alpha)) * (v(5) + v(6)) * half),
            (v(3) + v(4), T::zero()),
        ],
        InvariantSet::LagrGammaStar15 => {
            let np1 = n + 1;
            vec![
                (v(3) * (powi(v(11), np1) - one), v(2) * (powi(v(10), np1) - one)),
                (v(8) - one, v(4) * v(4) / v(2) * (one - v(14))),
                (v(5), one),
                (v(6), one),
            ]
        }
        InvariantSet::LagrN0Gamma3_13 => vec![
            (v(7), v(8)),
            (v(4), v(2) * v(9).powf(T::lit(-0.75)) * (one - v(12))),
            (v(9), one),
            (v(3), T::zero()),
        ],
        InvariantSet::Euler12 => {
            return Err(not_applicable("no scheme is written in the Eulerian invariants"));
        }
    })
}
