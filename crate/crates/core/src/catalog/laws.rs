//! The continuous conservation laws of the Lagrangian gas-dynamics equation.
//!
//! Every symmetry-generated law has the Noether form
//! `T^t = ξ^t L + Q ∂L/∂φ_t - B1`, `T^s = ξ^s L + Q ∂L/∂φ_s - B2` with
//! `L = φ_t²/2 - S φ^{n(1-γ)} φ_s^{1-γ} / (γ-1)` and `Q = η - ξ^t φ_t - ξ^s φ_s`. The catalog
//! stores the densities in the orientation in which they are usually written, which differs from
//! the Noether orientation by the sign [`ConservationLaw::sigma`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{argument, not_applicable, GasError, Result};
use crate::gas::{EntropyCase, EntropyProfile, GasModel};
use crate::num::{powi, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConservationLaw {
    /// Energy, from time translation.
    EnergyGeneral,
    /// Momentum, plane flow.
    MomentumN0,
    /// Motion of the center of mass, plane flow.
    CenterOfMassN0,
    /// Dilation `2t∂t + φ∂φ` at the special exponent.
    Projective1GammaStar,
    /// Projective symmetry `t²∂t + tφ∂φ` at the special exponent.
    Projective2GammaStar,
    /// Mass-coordinate translation, constant entropy.
    IsentropicZ2,
    /// Combined dilation, constant entropy.
    IsentropicZ3,
    /// Combined dilation, power-law entropy.
    PowerZ2,
    /// `t∂t + s∂s` for the power-law exponent `q = -2(n+2)/(n+1)` at the special exponent.
    PowerZq,
    /// Combined dilation and mass translation, exponential entropy.
    ExponentialZ2,
    /// Mass conservation, written as the trivial Lagrangian law with densities `(1, 0)`.
    Mass,
    /// Entropy along pathlines, `S_t = 0`.
    EntropyPathline,
}

/// Coefficients of a Noether symmetry, polynomial in `(t, s, φ)`:
/// `ξ^t = c0 + c1 t + c2 t²`, `ξ^s = d0 + d1 s`, `η = e0 + e1 φ + e2 t + e3 tφ`,
/// `B1 = f1 φ + f2 φ²/2`, `B2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymmetryData<T> {
    pub xi_t: [T; 3],
    pub xi_s: [T; 2],
    pub eta: [T; 4],
    pub b1: [T; 2],
}

impl<T: Real> SymmetryData<T> {
    pub fn xi_t(&self, t: T) -> T {
        self.xi_t[0] + t * (self.xi_t[1] + t * self.xi_t[2])
    }

    pub fn xi_s(&self, s: T) -> T {
        self.xi_s[0] + self.xi_s[1] * s
    }

    pub fn eta(&self, t: T, phi: T) -> T {
        self.eta[0] + self.eta[1] * phi + self.eta[2] * t + self.eta[3] * t * phi
    }

    pub fn b1(&self, phi: T) -> T {
        self.b1[0] * phi + self.b1[1] * phi * phi * T::lit(0.5)
    }

    pub fn b2(&self) -> T {
        T::zero()
    }

    /// A variational symmetry has no divergence terms.
    pub fn is_variational(&self) -> bool {
        self.b1.iter().all(|&b| b == T::zero())
    }

    /// `Q = η - ξ^t φ_t - ξ^s φ_s`.
    pub fn characteristic(&self, t: T, s: T, phi: T, phi_t: T, phi_s: T) -> T {
        self.eta(t, phi) - self.xi_t(t) * phi_t - self.xi_s(s) * phi_s
    }
}

/// Parameters the densities depend on besides the field: `n`, `γ` and the entropy exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawContext<T> {
    pub n: u32,
    pub gamma: T,
    /// Exponent `q` of power or exponential entropy, zero otherwise.
    pub q: T,
}

impl<T: Real> LawContext<T> {
    pub fn new(gas: &GasModel<T>, profile: &EntropyProfile<T>) -> Self {
        Self { n: gas.n(), gamma: gas.gamma(), q: profile.exponent().unwrap_or_else(T::zero) }
    }

    fn nr(&self) -> T {
        T::from_usize_lossy(self.n as usize)
    }

    /// `(n+3)γ - n - 1`.
    fn a1(&self) -> T {
        (self.nr() + T::lit(3.0)) * self.gamma - self.nr() - T::one()
    }

    /// `(n+1)γ - n - 3`.
    fn a2(&self) -> T {
        (self.nr() + T::one()) * self.gamma - self.nr() - T::lit(3.0)
    }
}

/// The power-law exponent `-2(n+2)/(n+1)` with an extra symmetry at the special exponent.
pub fn power_q_star<T: Real>(n: u32) -> T {
    -T::lit(2.0) * T::from_usize_lossy(n as usize + 2) / T::from_usize_lossy(n as usize + 1)
}

/// Lagrangian point in gas variables. `p = S ρ^γ` is implied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GasPoint<T> {
    pub t: T,
    pub s: T,
    pub r: T,
    pub u: T,
    pub rho: T,
    pub entropy: T,
}

/// Lagrangian point in potential form `r = φ(t, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhiPoint<T> {
    pub t: T,
    pub s: T,
    pub phi: T,
    pub phi_t: T,
    pub phi_s: T,
    pub entropy: T,
}

impl<T: Real> PhiPoint<T> {
    /// Gas variables by `u = φ_t`, `ρ = 1/(φ^n φ_s)`, `r = φ`.
    pub fn to_gas(&self, n: u32) -> GasPoint<T> {
        GasPoint {
            t: self.t,
            s: self.s,
            r: self.phi,
            u: self.phi_t,
            rho: T::one() / (powi(self.phi, n) * self.phi_s),
            entropy: self.entropy,
        }
    }
}

/// Eulerian state sample `(t, r, u, ρ, p, S, S_r)`.
///
/// `s` is only needed by laws whose densities carry the mass coordinate explicitly and that
/// cannot recover it from `S_r` (the isentropic dilation).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerianSample<T> {
    pub t: T,
    pub r: T,
    pub u: T,
    pub rho: T,
    pub p: T,
    pub entropy: T,
    pub entropy_r: T,
    pub s: Option<T>,
}

impl ConservationLaw {
    pub const ALL: [ConservationLaw; 12] = [
        Self::EnergyGeneral,
        Self::MomentumN0,
        Self::CenterOfMassN0,
        Self::Projective1GammaStar,
        Self::Projective2GammaStar,
        Self::IsentropicZ2,
        Self::IsentropicZ3,
        Self::PowerZ2,
        Self::PowerZq,
        Self::ExponentialZ2,
        Self::Mass,
        Self::EntropyPathline,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::EnergyGeneral => "energy-general",
            Self::MomentumN0 => "momentum-n0",
            Self::CenterOfMassN0 => "center-of-mass-n0",
            Self::Projective1GammaStar => "projective-1-gamma-star",
            Self::Projective2GammaStar => "projective-2-gamma-star",
            Self::IsentropicZ2 => "isentropic-z2",
            Self::IsentropicZ3 => "isentropic-z3",
            Self::PowerZ2 => "power-z2",
            Self::PowerZq => "power-zq",
            Self::ExponentialZ2 => "exponential-z2",
            Self::Mass => "mass",
            Self::EntropyPathline => "entropy-pathline",
        }
    }

    /// Orientation of the catalogued densities relative to the Noether densities.
    ///
    /// Committed from [`calibrate_sigma`](super::calibrate_sigma); the unit tests re-run the
    /// calibration and compare.
    pub fn sigma(self) -> i8 {
        match self {
            Self::EnergyGeneral | Self::CenterOfMassN0 => -1,
            _ => 1,
        }
    }

    /// Laws that hold identically and carry no symmetry.
    pub fn is_trivial(self) -> bool {
        matches!(self, Self::Mass | Self::EntropyPathline)
    }

    /// Whether the law exists for the given gas and entropy profile.
    ///
    /// Laws that coincide with another law up to a constant factor are not listed twice: at the
    /// special exponent the isentropic, power and exponential dilations reduce to multiples of
    /// the first projective law.
    pub fn applies<T: Real>(self, gas: &GasModel<T>, profile: &EntropyProfile<T>) -> bool {
        let star = gas.is_gamma_star();
        let case = profile.case();
        match self {
            Self::EnergyGeneral | Self::Mass | Self::EntropyPathline => true,
            Self::MomentumN0 | Self::CenterOfMassN0 => gas.n() == 0,
            Self::Projective1GammaStar | Self::Projective2GammaStar => star,
            Self::IsentropicZ2 => case == EntropyCase::Isentropic,
            Self::IsentropicZ3 => case == EntropyCase::Isentropic && !star,
            Self::PowerZ2 => case == EntropyCase::Power && !star,
            Self::PowerZq => {
                let qs = power_q_star::<T>(gas.n());
                case == EntropyCase::Power
                    && star
                    && profile
                        .exponent()
                        .is_some_and(|q| (q - qs).abs() <= T::lit(1e-12) * qs.abs())
            }
            Self::ExponentialZ2 => case == EntropyCase::Exponential && !star,
        }
    }

    pub fn check_applicable<T: Real>(self, gas: &GasModel<T>, profile: &EntropyProfile<T>) -> Result<()> {
        if self.applies(gas, profile) {
            Ok(())
        } else {
            Err(not_applicable(format!(
                "law {} does not hold for n={}, gamma={}, entropy case {:?}",
                self.id(),
                gas.n(),
                gas.gamma(),
                profile.case()
            )))
        }
    }

    /// Generator and divergence terms; zero for the trivial laws.
    pub fn symmetry<T: Real>(self, ctx: &LawContext<T>) -> SymmetryData<T> {
        let z = T::zero();
        let one = T::one();
        let two = T::lit(2.0);
        let q = ctx.q;
        let dilation = |ct: T, cs: T, cphi: T| SymmetryData {
            xi_t: [z, ct, z],
            xi_s: [z, cs],
            eta: [z, cphi, z, z],
            b1: [z, z],
        };
        match self {
            Self::EnergyGeneral => SymmetryData { xi_t: [one, z, z], ..SymmetryData::default() },
            Self::MomentumN0 => SymmetryData { eta: [one, z, z, z], ..SymmetryData::default() },
            Self::CenterOfMassN0 => SymmetryData { eta: [z, z, one, z], b1: [one, z], ..SymmetryData::default() },
            Self::Projective1GammaStar => dilation(two, z, one),
            Self::Projective2GammaStar => SymmetryData {
                xi_t: [z, z, one],
                eta: [z, z, z, one],
                b1: [z, one],
                ..SymmetryData::default()
            },
            Self::IsentropicZ2 => SymmetryData { xi_s: [one, z], ..SymmetryData::default() },
            Self::IsentropicZ3 => dilation(ctx.a1(), ctx.a2(), ctx.gamma + one),
            Self::PowerZ2 => dilation(ctx.a1() + two * q, ctx.a2(), ctx.gamma + q + one),
            Self::PowerZq => dilation(one, one, z),
            Self::ExponentialZ2 => SymmetryData {
                xi_t: [z, two * q, z],
                xi_s: [ctx.a2(), z],
                eta: [z, q, z, z],
                b1: [z, z],
            },
            Self::Mass | Self::EntropyPathline => SymmetryData::default(),
        }
    }

    /// Whether the gas-variable densities contain the mass coordinate `s` explicitly.
    pub fn uses_mass_coordinate<T: Real>(self, ctx: &LawContext<T>) -> bool {
        self.symmetry(ctx).xi_s[1] != T::zero()
    }

    /// `(T^t, T^s)` in gas variables, obtained from the Noether formula.
    pub fn densities_gas<T: Real>(self, ctx: &LawContext<T>, x: &GasPoint<T>) -> (T, T) {
        match self {
            Self::Mass => return (T::one(), T::zero()),
            Self::EntropyPathline => return (x.entropy, T::zero()),
            _ => {}
        }
        let b = GasBlocks::new(ctx, x);
        let m = powi(x.r, ctx.n) * x.rho;
        let (tt_w, ts) = self.noether_weighted(ctx, x.t, x.s, x.r, &b, m);
        (tt_w / m, ts)
    }

    /// `r^n ρ T^t` and `T^s` without dividing by the mass weight, so vacuum points stay finite.
    fn noether_weighted<T: Real>(self, ctx: &LawContext<T>, t: T, s: T, r: T, b: &GasBlocks<T>, m: T) -> (T, T) {
        let sym = self.symmetry(ctx);
        let sig = T::lit(self.sigma() as f64);
        let (xt, xs, eta) = (sym.xi_t(t), sym.xi_s(s), sym.eta(t, r));
        let tt = -xt * m * b.e + eta * m * b.u - xs * b.u - sym.b1(r) * m;
        let ts = -xt * b.energy_flux + xs * b.k + eta * b.rn_p - sym.b2();
        (sig * tt, sig * ts)
    }

    /// `(T^t, T^s)` in potential form, transcribed term by term.
    pub fn densities_phi<T: Real>(self, ctx: &LawContext<T>, x: &PhiPoint<T>) -> (T, T) {
        let n = ctx.n;
        let g = ctx.gamma;
        let g1 = g - T::one();
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let (t, s, phi, pt, ps, big_s) = (x.t, x.s, x.phi, x.phi_t, x.phi_s, x.entropy);
        let nr = T::from_usize_lossy(n as usize);
        // φ^{n(1-γ)} φ_s^{1-γ}
        let x1 = phi.powf(nr * (T::one() - g)) * ps.powf(T::one() - g);
        // S φ^{n(1-γ)} φ_t φ_s^{-γ}
        let f = big_s * phi.powf(nr * (T::one() - g)) * pt * ps.powf(-g);
        // S φ^{-nγ+n+1} φ_s^{-γ}
        let gg = big_s * phi.powf(-nr * g + nr + T::one()) * ps.powf(-g);
        let e = pt * pt * half + big_s / g1 * x1;
        let k = pt * pt * half - g * big_s / g1 * x1;
        let w = ps * pt;
        let scaling = |ct: T, cs: T, cphi: T| (-ct * t * e - cs * w + cphi * phi * pt, -ct * t * f + cs * k + cphi * gg);
        match self {
            Self::EnergyGeneral => (e, f),
            Self::MomentumN0 => (pt, big_s * ps.powf(-g)),
            Self::CenterOfMassN0 => (phi - pt * t, -t * big_s * ps.powf(-g)),
            Self::Projective1GammaStar => (two * t * (-e) + phi * pt, -two * t * f + gg),
            Self::Projective2GammaStar => (-t * t * e + t * phi * pt - phi * phi * half, -t * t * f + t * gg),
            Self::IsentropicZ2 => (-w, k),
            Self::IsentropicZ3 => scaling(ctx.a1(), ctx.a2() * s, g + T::one()),
            Self::PowerZ2 => scaling(ctx.a1() + two * ctx.q, ctx.a2() * s, g + ctx.q + T::one()),
            Self::PowerZq => scaling(T::one(), s, T::zero()),
            Self::ExponentialZ2 => scaling(two * ctx.q, ctx.a2(), ctx.q),
            Self::Mass => (T::one(), T::zero()),
            Self::EntropyPathline => (big_s, T::zero()),
        }
    }

    /// Eulerian densities `(^eT^t, ^eT^r)` in closed form, transcribed term by term.
    pub fn densities_eulerian<T: Real>(self, ctx: &LawContext<T>, x: &EulerianSample<T>) -> Result<(T, T)> {
        let n = ctx.n;
        let g = ctx.gamma;
        let g1 = g - T::one();
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let (t, r, u, rho, p, big_s) = (x.t, x.r, x.u, x.rho, x.p, x.entropy);
        let rn = powi(r, n);
        let rn1 = rn * r;
        let e0 = rn * (rho * u * u * half + p / g1);
        let h0 = rn * (rho * u * u * half + g * p / g1) * u;
        let m = rn1 * rho * u;
        let pi = rn1 * (rho * u * u + p);
        let kk = u * u * half + g * big_s / g1 * rho.powf(g1);
        let scaling = |ct: T, cs: T, cphi: T| (-ct * t * e0 - cs * u + cphi * m, -ct * t * h0 - cs * kk + cphi * pi);
        Ok(match self {
            Self::EnergyGeneral => (e0, h0),
            Self::MomentumN0 => (rho * u, rho * u * u + p),
            Self::CenterOfMassN0 => (rho * (r - t * u), rho * u * (r - t * u) - t * p),
            Self::Projective1GammaStar => (-two * t * e0 + m, -two * t * h0 + pi),
            Self::Projective2GammaStar => (
                -t * t * e0 + t * m - rn1 * r * rho * half,
                -t * t * h0 + t * pi - rn1 * r * rho * u * half,
            ),
            Self::IsentropicZ2 => (-u, -kk),
            Self::IsentropicZ3 => scaling(ctx.a1(), ctx.a2() * self.mass_coordinate(ctx, x)?, g + T::one()),
            Self::PowerZ2 => scaling(
                ctx.a1() + two * ctx.q,
                ctx.a2() * self.mass_coordinate(ctx, x)?,
                g + ctx.q + T::one(),
            ),
            Self::PowerZq => scaling(T::one(), self.mass_coordinate(ctx, x)?, T::zero()),
            Self::ExponentialZ2 => scaling(two * ctx.q, ctx.a2(), ctx.q),
            Self::Mass => (rn * rho, rn * rho * u),
            Self::EntropyPathline => (rn * rho * big_s, rn * rho * u * big_s),
        })
    }

    /// The mass coordinate needed by a law at an Eulerian sample: recovered from
    /// `s = q r^n ρ S / S_r` for power-law entropy, taken from the sample otherwise.
    pub fn mass_coordinate<T: Real>(self, ctx: &LawContext<T>, x: &EulerianSample<T>) -> Result<T> {
        match self {
            Self::PowerZ2 | Self::PowerZq => power_mass_coordinate(ctx.q, ctx.n, x),
            _ => x.s.ok_or_else(|| argument(format!("law {} needs the mass coordinate s in the sample", self.id()))),
        }
    }
}

/// `s = q r^n ρ S / S_r`, valid for power-law entropy.
pub fn power_mass_coordinate<T: Real>(q: T, n: u32, x: &EulerianSample<T>) -> Result<T> {
    if x.entropy_r == T::zero() {
        return Err(GasError::SingularConstraint(
            "S_r = 0: the mass coordinate cannot be recovered from the entropy gradient".into(),
        ));
    }
    Ok(q * powi(x.r, n) * x.rho * x.entropy / x.entropy_r)
}

/// Building blocks of the gas-variable densities.
struct GasBlocks<T> {
    u: T,
    /// `u²/2 + S ρ^{γ-1}/(γ-1)`
    e: T,
    /// `u²/2 - γ S ρ^{γ-1}/(γ-1)`
    k: T,
    /// `S r^n ρ^γ u`
    energy_flux: T,
    /// `r^n p`
    rn_p: T,
}

impl<T: Real> GasBlocks<T> {
    fn new(ctx: &LawContext<T>, x: &GasPoint<T>) -> Self {
        let g = ctx.gamma;
        let g1 = g - T::one();
        let half = T::lit(0.5);
        let sv = x.entropy * x.rho.powf(g1);
        let rn_p = powi(x.r, ctx.n) * x.entropy * x.rho.powf(g);
        Self {
            u: x.u,
            e: x.u * x.u * half + sv / g1,
            k: x.u * x.u * half - g * sv / g1,
            energy_flux: rn_p * x.u,
            rn_p,
        }
    }
}

/// Converts Lagrangian densities to Eulerian ones: `^eT^t = r^n ρ T^t`, `^eT^r = r^n ρ u T^t + T^s`.
///
/// The product `r^n ρ T^t` is formed before any division by the mass weight, so vacuum samples
/// (`ρ = 0`) give finite results.
pub fn eulerian_density_convert<T: Real>(
    law: ConservationLaw,
    ctx: &LawContext<T>,
    x: &EulerianSample<T>,
) -> Result<(T, T)> {
    if ctx.n >= 1 && !(x.r > T::zero()) {
        return Err(crate::error::domain("radius must be positive for n >= 1"));
    }
    let m = powi(x.r, ctx.n) * x.rho;
    let s = if law.uses_mass_coordinate(ctx) { law.mass_coordinate(ctx, x)? } else { T::zero() };
    let (ett, ts) = match law {
        ConservationLaw::Mass => (m, T::zero()),
        ConservationLaw::EntropyPathline => (m * x.entropy, T::zero()),
        _ => {
            let gp = GasPoint { t: x.t, s, r: x.r, u: x.u, rho: x.rho, entropy: x.entropy };
            let b = GasBlocks::new(ctx, &gp);
            law.noether_weighted(ctx, x.t, s, x.r, &b, m)
        }
    };
    Ok((ett, x.u * ett + ts))
}

/// All laws holding for the gas and entropy profile.
pub fn applicable_laws<T: Real>(gas: &GasModel<T>, profile: &EntropyProfile<T>) -> Vec<ConservationLaw> {
    ConservationLaw::ALL.into_iter().filter(|l| l.applies(gas, profile)).collect()
}

impl fmt::Display for ConservationLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ConservationLaw {
    type Err = GasError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| argument(format!("unknown conservation law '{s}'")))
    }
}
