//! Weighted conservation laws of the Eulerian equations with explicit source terms.
//!
//! For a smooth flow `(ρ, u, p)(r)` at a fixed instant, time derivatives are taken from the
//! equations of motion:
//! `ρ_t = -u ρ_r - ρ (u_r + n u / r)`, `u_t = -u u_r - p_r / ρ`, `p_t = -u p_r - γ p (u_r + n u / r)`.
//! Each law is checked in the form `D_t A + D_r B = source`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fd::d1_central6;
use crate::error::{argument, domain, GasError, Result};
use crate::gas::GasModel;
use crate::num::{powi, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InhomogeneousLaw {
    /// `[ρF]_t + [ρuF]_r = ρ (F_t + u (F_r - n F / r))` for a weight `F(t, r, z)`, `z = p / ρ^γ`.
    MassF,
    /// `[hρu]_t + [h(ρu² + p)]_r = h_t ρu + h_r (ρu² + p) - (n/r) h ρu²` for a weight `h(t, r)`.
    MomentumH,
    /// `[hE]_t + [h(E + p)u]_r = h_t E + (h_r - n h / r)(E + p) u`, `E = ρu²/2 + p/(γ-1)`.
    EnergyH,
}

impl InhomogeneousLaw {
    pub const ALL: [InhomogeneousLaw; 3] = [Self::MassF, Self::MomentumH, Self::EnergyH];

    pub fn id(self) -> &'static str {
        match self {
            Self::MassF => "mass-f",
            Self::MomentumH => "momentum-h",
            Self::EnergyH => "energy-h",
        }
    }
}

impl fmt::Display for InhomogeneousLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for InhomogeneousLaw {
    type Err = GasError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| argument(format!("unknown inhomogeneous law `{s}`")))
    }
}

/// An instantaneous Eulerian flow given by profiles in `r`.
pub struct EulerianFlow<'a, T> {
    pub rho: &'a dyn Fn(T) -> T,
    pub u: &'a dyn Fn(T) -> T,
    pub p: &'a dyn Fn(T) -> T,
}

/// Largest identity residual and largest source magnitude over the sample points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InhomogeneousCheck<T> {
    pub max_residual: T,
    pub max_source: T,
}

struct Local<T> {
    rho: T,
    u: T,
    p: T,
    rho_t: T,
    p_t: T,
    u_t: T,
}

fn local<T: Real>(flow: &EulerianFlow<'_, T>, gas: &GasModel<T>, r: T, h: T) -> Result<Local<T>> {
    let (rho, u, p) = ((flow.rho)(r), (flow.u)(r), (flow.p)(r));
    if !(rho > T::zero()) {
        return Err(domain(format!("density {rho} at r = {r} is not positive")));
    }
    if !(p >= T::zero()) {
        return Err(domain(format!("pressure {p} at r = {r} is negative")));
    }
    let rho_r = d1_central6(flow.rho, r, h);
    let u_r = d1_central6(flow.u, r, h);
    let p_r = d1_central6(flow.p, r, h);
    let div = if gas.n() == 0 { u_r } else { u_r + gas.n_real() * u / r };
    Ok(Local {
        rho,
        u,
        p,
        rho_t: -u * rho_r - rho * div,
        u_t: -u * u_r - p_r / rho,
        p_t: -u * p_r - gas.gamma() * p * div,
    })
}

/// Checks one inhomogeneous law at the given radii and time.
///
/// `weight(t, r, z)` is `F` for [`InhomogeneousLaw::MassF`] and `h` (ignoring `z`) otherwise.
/// Derivatives in `r` and of the weight are sixth-order central differences with step `h`.
pub fn inhomogeneous_identity_residual<T: Real>(
    law: InhomogeneousLaw,
    flow: &EulerianFlow<'_, T>,
    weight: &dyn Fn(T, T, T) -> T,
    gas: &GasModel<T>,
    t: T,
    radii: &[T],
    h: T,
) -> Result<InhomogeneousCheck<T>> {
    if radii.is_empty() || !(h > T::zero()) {
        return Err(argument("need at least one radius and a positive step"));
    }
    let g = gas.gamma();
    let n = gas.n();
    let nr = gas.n_real();
    let gm1 = g - T::one();
    let half = T::lit(0.5);
    let zf = |r: T| (flow.p)(r) / (flow.rho)(r).powf(g);
    let mut out = InhomogeneousCheck { max_residual: T::zero(), max_source: T::zero() };
    for &r in radii {
        if n >= 1 && !(r - T::lit(3.0) * h > T::zero()) {
            return Err(domain(format!("radius {r} is too close to the centre")));
        }
        let x = local(flow, gas, r, h)?;
        // n/r factor, zero in the planar case
        let geo = if n == 0 { T::zero() } else { nr / r };
        let (lhs, src) = match law {
            InhomogeneousLaw::MassF => {
                let z = x.p / x.rho.powf(g);
                let f = weight(t, r, z);
                let f_t = d1_central6(|tt| weight(tt, r, z), t, h);
                let f_r = d1_central6(|rr| weight(t, rr, z), r, h);
                let f_z = d1_central6(|zz| weight(t, r, zz), z, h * z.abs().max(T::one()));
                let z_t = x.p_t / x.rho.powf(g) - g * x.p * x.rho.powf(-g - T::one()) * x.rho_t;
                let a_t = x.rho_t * f + x.rho * (f_t + f_z * z_t);
                let b_r = d1_central6(|rr| (flow.rho)(rr) * (flow.u)(rr) * weight(t, rr, zf(rr)), r, h);
                (a_t + b_r, x.rho * (f_t + x.u * (f_r - geo * f)))
            }
            InhomogeneousLaw::MomentumH => {
                let w = weight(t, r, T::zero());
                let w_t = d1_central6(|tt| weight(tt, r, T::zero()), t, h);
                let w_r = d1_central6(|rr| weight(t, rr, T::zero()), r, h);
                let a_t = w_t * x.rho * x.u + w * (x.rho_t * x.u + x.rho * x.u_t);
                let b_r = d1_central6(
                    |rr| {
                        let (d, v) = ((flow.rho)(rr), (flow.u)(rr));
                        weight(t, rr, T::zero()) * (d * v * v + (flow.p)(rr))
                    },
                    r,
                    h,
                );
                let flux = x.rho * x.u * x.u + x.p;
                (a_t + b_r, w_t * x.rho * x.u + w_r * flux - geo * w * x.rho * x.u * x.u)
            }
            InhomogeneousLaw::EnergyH => {
                let w = weight(t, r, T::zero());
                let w_t = d1_central6(|tt| weight(tt, r, T::zero()), t, h);
                let w_r = d1_central6(|rr| weight(t, rr, T::zero()), r, h);
                let e = half * x.rho * x.u * x.u + x.p / gm1;
                let e_t = half * x.rho_t * x.u * x.u + x.rho * x.u * x.u_t + x.p_t / gm1;
                let a_t = w_t * e + w * e_t;
                let b_r = d1_central6(
                    |rr| {
                        let (d, v, pp) = ((flow.rho)(rr), (flow.u)(rr), (flow.p)(rr));
                        weight(t, rr, T::zero()) * (half * d * v * v + g * pp / gm1) * v
                    },
                    r,
                    h,
                );
                (a_t + b_r, w_t * e + (w_r - geo * w) * (e + x.p) * x.u)
            }
        };
        out.max_residual = out.max_residual.max((lhs - src).abs());
        out.max_source = out.max_source.max(src.abs());
    }
    Ok(out)
}

/// The weight for which the law has no source: `F = r^n g(z)` for mass, `h = r^n` for energy,
/// and `h = 1` for planar momentum.
pub fn homogeneous_weight<T: Real>(law: InhomogeneousLaw, n: u32, g: impl Fn(T) -> T) -> impl Fn(T, T, T) -> T {
    move |_t, r, z| match law {
        InhomogeneousLaw::MassF => powi(r, n) * g(z),
        _ => powi(r, n),
    }
}

/// Random smooth flow and weight coefficients on `r ∈ [0.5, 1.5]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCase {
    /// `ρ = ρ0 (1 + a sin(k r + θ))`
    pub rho: (f64, f64, f64, f64),
    /// `u = u0 + a cos(k r + θ)`
    pub u: (f64, f64, f64, f64),
    /// `p = p0 (1 + a sin(k r + θ))`
    pub p: (f64, f64, f64, f64),
    /// weight `exp(c_t t) r^{c_r} (1 + c_z z)` or `exp(c_t t) r^{c_r}`
    pub weight: (f64, f64, f64),
}

impl RandomCase {
    pub fn draw<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let mut wave = |base: (f64, f64)| {
            (
                rng.gen_range(base.0..base.1),
                rng.gen_range(0.05..0.3),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        };
        let rho = wave((0.5, 2.0));
        let u = wave((-0.5, 0.5));
        let p = wave((0.5, 2.0));
        let weight = (rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
        Self { rho, u, p, weight }
    }

    pub fn rho(&self, r: f64) -> f64 {
        let (b, a, k, th) = self.rho;
        b * (1.0 + a * (k * r + th).sin())
    }

    pub fn u(&self, r: f64) -> f64 {
        let (b, a, k, th) = self.u;
        b + a * (k * r + th).cos()
    }

    pub fn p(&self, r: f64) -> f64 {
        let (b, a, k, th) = self.p;
        b * (1.0 + a * (k * r + th).sin())
    }

    pub fn weight(&self, t: f64, r: f64, z: f64) -> f64 {
        let (ct, cr, cz) = self.weight;
        (ct * t).exp() * r.powf(cr) * (1.0 + cz * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn radii() -> Vec<f64> {
        (0..9).map(|i| 0.6 + 0.1 * i as f64).collect()
    }

    #[test]
    fn identities_hold_for_random_weights() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 0..3 {
            let gas = GasModel::new(n, 1.4).unwrap();
            for _ in 0..5 {
                let c = RandomCase::draw(&mut rng);
                let (rho, u, p) = (|r| c.rho(r), |r| c.u(r), |r| c.p(r));
                let flow = EulerianFlow { rho: &rho, u: &u, p: &p };
                let w = |t, r, z| c.weight(t, r, z);
                for law in InhomogeneousLaw::ALL {
                    let chk = inhomogeneous_identity_residual(law, &flow, &w, &gas, 0.3, &radii(), 1e-3).unwrap();
                    assert!(chk.max_residual < 1e-8, "{law} n={n}: {chk:?}");
                }
            }
        }
    }

    #[test]
    fn homogeneous_weights_have_no_source() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for n in 0..3 {
            let gas = GasModel::new(n, 5.0 / 3.0).unwrap();
            let c = RandomCase::draw(&mut rng);
            let (rho, u, p) = (|r| c.rho(r), |r| c.u(r), |r| c.p(r));
            let flow = EulerianFlow { rho: &rho, u: &u, p: &p };
            for law in [InhomogeneousLaw::MassF, InhomogeneousLaw::EnergyH] {
                let w = homogeneous_weight(law, n, |z: f64| 1.0 + z * z);
                let chk = inhomogeneous_identity_residual(law, &flow, &w, &gas, 0.0, &radii(), 1e-3).unwrap();
                assert!(chk.max_source < 1e-10, "{law} n={n}: {chk:?}");
            }
            let w = homogeneous_weight(InhomogeneousLaw::MomentumH, n, |_z: f64| 1.0);
            let chk =
                inhomogeneous_identity_residual(InhomogeneousLaw::MomentumH, &flow, &w, &gas, 0.0, &radii(), 1e-3)
                    .unwrap();
            // the geometric pressure term n r^{n-1} p survives off the plane
            assert_eq!(chk.max_source < 1e-10, n == 0, "n={n}: {chk:?}");
        }
    }

    #[test]
    fn rejects_vacuum_and_parses_ids() {
        let gas = GasModel::new(0, 1.4).unwrap();
        let (rho, u, p) = (|_r: f64| 0.0, |_r: f64| 0.0, |_r: f64| 1.0);
        let flow = EulerianFlow { rho: &rho, u: &u, p: &p };
        let w = |_t: f64, _r: f64, _z: f64| 1.0;
        assert!(matches!(
            inhomogeneous_identity_residual(InhomogeneousLaw::MassF, &flow, &w, &gas, 0.0, &[1.0], 1e-3),
            Err(GasError::Domain(_))
        ));
        for law in InhomogeneousLaw::ALL {
            assert_eq!(law.id().parse::<InhomogeneousLaw>().unwrap(), law);
        }
    }
}
