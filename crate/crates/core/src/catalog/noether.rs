//! The gas-dynamics equation in potential form and the Noether identity checker.

use serde::Serialize;

use super::fd::{d1_central6, STENCIL_REACH};
use super::field::{FieldJet, SmoothField};
use super::laws::{ConservationLaw, LawContext, PhiPoint};
use crate::error::{argument, domain, Result};
use crate::gas::{EntropyProfile, GasModel};
use crate::num::Real;

/// `E(φ) = φ_tt + φ^{n(1-γ)} φ_s^{-γ} (S' - nγS φ_s/φ - γS φ_ss/φ_s)`, the negative variational
/// derivative of the Lagrangian.
pub fn euler_lagrange_residual<T: Real, F: SmoothField<T> + ?Sized>(
    field: &F,
    gas: &GasModel<T>,
    profile: &EntropyProfile<T>,
    t: T,
    s: T,
) -> Result<T> {
    let j = field.jet(t, s);
    let (big_s, ds) = profile.eval(s)?;
    el_from_jet(&j, gas, big_s, ds)
}

fn el_from_jet<T: Real>(j: &FieldJet<T>, gas: &GasModel<T>, big_s: T, ds: T) -> Result<T> {
    if !(j.phi_s > T::zero()) {
        return Err(domain(format!("φ_s = {} makes the density non-positive", j.phi_s)));
    }
    let n = gas.n();
    if n >= 1 && !(j.phi > T::zero()) {
        return Err(domain(format!("φ = {} is not a positive radius", j.phi)));
    }
    let g = gas.gamma();
    let nr = gas.n_real();
    let pref = if n == 0 { T::one() } else { j.phi.powf(nr * (T::one() - g)) } * j.phi_s.powf(-g);
    let geom = if n == 0 { T::zero() } else { nr * g * big_s * j.phi_s / j.phi };
    Ok(j.phi_tt + pref * (ds - geom - g * big_s * j.phi_ss / j.phi_s))
}

/// Result of one identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoetherCheck<T> {
    /// `max |D_t T^t + D_s T^s - σ Q E|` over the grid.
    pub max_residual: T,
    /// `max |D_t T^t + D_s T^s|`, which is not small for non-solutions.
    pub max_divergence: T,
    /// `max |Q E|`.
    pub max_source: T,
}

fn densities_along<T: Real, F: SmoothField<T> + ?Sized>(
    law: ConservationLaw,
    ctx: &LawContext<T>,
    field: &F,
    profile: &EntropyProfile<T>,
    t: T,
    s: T,
) -> Result<(T, T)> {
    let j = field.jet(t, s);
    let big_s = profile.value(s)?;
    let x = PhiPoint { t, s, phi: j.phi, phi_t: j.phi_t, phi_s: j.phi_s, entropy: big_s };
    Ok(law.densities_phi(ctx, &x))
}

/// Divergence `D_t T^t + D_s T^s` and Noether source `Q E` at a point.
fn divergence_and_source<T: Real, F: SmoothField<T> + ?Sized>(
    law: ConservationLaw,
    field: &F,
    gas: &GasModel<T>,
    profile: &EntropyProfile<T>,
    t: T,
    s: T,
    h: (T, T),
) -> Result<(T, T)> {
    let ctx = LawContext::new(gas, profile);
    // profile errors surface before the closures swallow them
    for k in -3..=3 {
        profile.eval(s + T::lit(k as f64) * h.1)?;
    }
    let dt = d1_central6(|x| densities_along(law, &ctx, field, profile, x, s).map(|d| d.0).unwrap_or(T::nan()), t, h.0);
    let ds = d1_central6(|x| densities_along(law, &ctx, field, profile, t, x).map(|d| d.1).unwrap_or(T::nan()), s, h.1);
    let j = field.jet(t, s);
    let (big_s, dsv) = profile.eval(s)?;
    let e = el_from_jet(&j, gas, big_s, dsv)?;
    let q = law.symmetry(&ctx).characteristic(t, s, j.phi, j.phi_t, j.phi_s);
    Ok((dt + ds, q * e))
}

/// Default finite-difference steps: 0.4% of the domain extent in each direction.
pub fn default_steps<T: Real, F: SmoothField<T> + ?Sized>(field: &F) -> (T, T) {
    let d = field.domain();
    (T::lit(4e-3) * (d.t1 - d.t0), T::lit(4e-3) * (d.s1 - d.s0))
}

/// Checks `D_t T^t + D_s T^s = σ Q E(φ)` at every grid point, with the divergence taken by
/// sixth-order central differences.
pub fn noether_identity_residual<T: Real, F: SmoothField<T> + ?Sized>(
    law: ConservationLaw,
    field: &F,
    gas: &GasModel<T>,
    profile: &EntropyProfile<T>,
    grid: &[(T, T)],
    steps: Option<(T, T)>,
) -> Result<NoetherCheck<T>> {
    law.check_applicable(gas, profile)?;
    if grid.is_empty() {
        return Err(argument("empty evaluation grid"));
    }
    let h = steps.unwrap_or_else(|| default_steps(field));
    let dom = field.domain();
    let reach = T::lit(STENCIL_REACH);
    let sigma = T::lit(law.sigma() as f64);
    let mut out = NoetherCheck { max_residual: T::zero(), max_divergence: T::zero(), max_source: T::zero() };
    for &(t, s) in grid {
        if !(dom.contains(t - reach * h.0, s - reach * h.1) && dom.contains(t + reach * h.0, s + reach * h.1)) {
            return Err(argument(format!("grid point ({t}, {s}) is too close to the field boundary")));
        }
        let (div, src) = divergence_and_source(law, field, gas, profile, t, s, h)?;
        out.max_residual = out.max_residual.max((div - sigma * src).abs());
        out.max_divergence = out.max_divergence.max(div.abs());
        out.max_source = out.max_source.max(src.abs());
    }
    Ok(out)
}

/// Picks the sign `σ ∈ {+1, -1}` minimising `Σ |D_t T^t + D_s T^s - σ Q E|` over the grid.
///
/// Returns `None` when `Q E` vanishes on the grid (trivial laws or solution fields).
pub fn calibrate_sigma<T: Real, F: SmoothField<T> + ?Sized>(
    law: ConservationLaw,
    field: &F,
    gas: &GasModel<T>,
    profile: &EntropyProfile<T>,
    grid: &[(T, T)],
) -> Result<Option<i8>> {
    law.check_applicable(gas, profile)?;
    let h = default_steps(field);
    let (mut plus, mut minus, mut scale) = (T::zero(), T::zero(), T::zero());
    for &(t, s) in grid {
        let (div, src) = divergence_and_source(law, field, gas, profile, t, s, h)?;
        plus = plus + (div - src).abs();
        minus = minus + (div + src).abs();
        scale = scale + src.abs();
    }
    if scale <= T::lit(1e-9) * T::from_usize_lossy(grid.len()) {
        return Ok(None);
    }
    Ok(Some(if plus <= minus { 1 } else { -1 }))
}

/// A representative gas and entropy profile for which each law holds; used by the calibration
/// and by the verification suite.
pub fn representative_setups(law: ConservationLaw) -> Vec<(GasModel<f64>, EntropyProfile<f64>)> {
    let gas = |n: u32, g: f64| GasModel::new(n, g).expect("valid gas");
    let star = |n: u32| GasModel::with_gamma_star(n).expect("valid gas");
    let arbitrary = || EntropyProfile::tabulated(vec![0.3, 0.6, 1.45, 1.7], vec![1.0, 1.3, 1.2, 1.6]).expect("table");
    let iso = || EntropyProfile::constant(1.2).expect("profile");
    match law {
        ConservationLaw::EnergyGeneral | ConservationLaw::Mass | ConservationLaw::EntropyPathline => {
            (0..3).map(|n| (gas(n, 1.4), arbitrary())).collect()
        }
        ConservationLaw::MomentumN0 | ConservationLaw::CenterOfMassN0 => vec![(gas(0, 1.4), arbitrary()), (star(0), iso())],
        ConservationLaw::Projective1GammaStar | ConservationLaw::Projective2GammaStar => {
            (0..3).map(|n| (star(n), arbitrary())).collect()
        }
        ConservationLaw::IsentropicZ2 => vec![(gas(1, 1.4), iso()), (star(0), iso()), (gas(2, 1.3), iso())],
        ConservationLaw::IsentropicZ3 => (0..3).map(|n| (gas(n, 1.4), iso())).collect(),
        ConservationLaw::PowerZ2 => (0..3)
            .map(|n| (gas(n, 1.4), EntropyProfile::power(1.0, 1.5).expect("profile")))
            .collect(),
        ConservationLaw::PowerZq => (0..3)
            .map(|n| (star(n), EntropyProfile::power(1.0, super::laws::power_q_star(n)).expect("profile")))
            .collect(),
        ConservationLaw::ExponentialZ2 => (0..3)
            .map(|n| (gas(n, 1.4), EntropyProfile::exponential(1.0, 0.7).expect("profile")))
            .collect(),
    }
}

/// Interior evaluation grid of `k x k` points on `[0.2, 0.8] x [0.7, 1.3]`.
pub fn interior_grid(k: usize) -> Vec<(f64, f64)> {
    let k = k.max(1);
    let at = |i: usize, a: f64, b: f64| if k == 1 { 0.5 * (a + b) } else { a + (b - a) * i as f64 / (k - 1) as f64 };
    (0..k)
        .flat_map(|i| (0..k).map(move |j| (at(i, 0.2, 0.8), at(j, 0.7, 1.3))))
        .collect()
}
