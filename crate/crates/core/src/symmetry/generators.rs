//! Lie point symmetry generators of the gas-dynamics system and their finite flows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{argument, domain, Result};
use crate::gas::GasModel;
use crate::num::Real;

/// Coordinates in which a generator is written. Eulerian generators never touch `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    Eulerian,
    Lagrangian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorId {
    /// Time translation.
    X1,
    /// Dilation of `t` and `r` (and `s` in the Lagrangian frame).
    X2,
    /// Dilation that also scales `u` and `rho`.
    X3,
    /// Dilation of `rho` and `p` (and `s`).
    X4,
    /// Space translation, only for `n = 0`.
    SpaceTranslation,
    /// Galilean boost, only for `n = 0`.
    Galilean,
    /// Projective transformation, only for the special exponent.
    Projective,
    /// Translation of the mass coordinate (Lagrangian frame only).
    X0,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 8] = [
        Self::X1,
        Self::X2,
        Self::X3,
        Self::X4,
        Self::SpaceTranslation,
        Self::Galilean,
        Self::Projective,
        Self::X0,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::X1 => "x1",
            Self::X2 => "x2",
            Self::X3 => "x3",
            Self::X4 => "x4",
            Self::SpaceTranslation => "space-translation",
            Self::Galilean => "galilean",
            Self::Projective => "projective",
            Self::X0 => "x0",
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for GeneratorId {
    type Err = crate::GasError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        let alias = match s.as_str() {
            "x5" | "xstar-n" => "space-translation",
            "x6" | "xstarstar-n" => "galilean",
            "x7" | "xstar-gamma" => "projective",
            other => other,
        };
        Self::ALL
            .into_iter()
            .find(|g| g.id() == alias)
            .ok_or_else(|| argument(format!("unknown generator '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: GeneratorId,
    pub frame: Frame,
}

/// A point of the extended space `(t, s, r, u, rho, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub t: T,
    pub s: T,
    pub r: T,
    pub u: T,
    pub rho: T,
    pub p: T,
}

impl Generator {
    pub const fn lagrangian(id: GeneratorId) -> Self {
        Self { id, frame: Frame::Lagrangian }
    }

    pub const fn eulerian(id: GeneratorId) -> Self {
        Self { id, frame: Frame::Eulerian }
    }

    /// Whether the gas-dynamics system admits this generator for the given gas.
    pub fn is_admitted<T: Real>(&self, gas: &GasModel<T>) -> bool {
        match self.id {
            GeneratorId::X1 | GeneratorId::X2 | GeneratorId::X3 | GeneratorId::X4 => true,
            GeneratorId::SpaceTranslation | GeneratorId::Galilean => gas.n() == 0,
            GeneratorId::Projective => gas.is_gamma_star(),
            GeneratorId::X0 => self.frame == Frame::Lagrangian,
        }
    }

    /// All generators of the frame admitted for the gas.
    pub fn admitted<T: Real>(frame: Frame, gas: &GasModel<T>) -> Vec<Generator> {
        GeneratorId::ALL
            .into_iter()
            .map(|id| Generator { id, frame })
            .filter(|g| g.is_admitted(gas))
            .collect()
    }

    /// Coefficients `(ξ^t, ξ^s, ξ^r, η^u, η^rho, η^p)` at a point, packed as a [`Point`].
    pub fn coefficients<T: Real>(&self, n: u32, x: &Point<T>) -> Point<T> {
        let z = T::zero();
        let one = T::one();
        let lag = self.frame == Frame::Lagrangian;
        let np1 = T::from_usize_lossy(n as usize + 1);
        let np3 = T::from_usize_lossy(n as usize + 3);
        let two = T::lit(2.0);
        let pick = |v: T| if lag { v } else { z };
        match self.id {
            GeneratorId::X1 => Point { t: one, ..Point::default() },
            GeneratorId::X2 => Point { t: x.t, s: pick(np1 * x.s), r: x.r, ..Point::default() },
            GeneratorId::X3 => Point {
                t: two * x.t,
                s: pick(np3 * x.s),
                r: x.r,
                u: -x.u,
                rho: two * x.rho,
                p: z,
            },
            GeneratorId::X4 => Point { s: pick(x.s), rho: x.rho, p: x.p, ..Point::default() },
            GeneratorId::SpaceTranslation => Point { r: one, ..Point::default() },
            GeneratorId::Galilean => Point { r: x.t, u: one, ..Point::default() },
            GeneratorId::Projective => Point {
                t: x.t * x.t,
                s: z,
                r: x.t * x.r,
                u: x.r - x.t * x.u,
                rho: -np1 * x.t * x.rho,
                p: -np3 * x.t * x.p,
            },
            GeneratorId::X0 => Point { s: pick(one), ..Point::default() },
        }
    }

    /// Closed-form one-parameter flow `exp(a X)` applied to a point.
    pub fn flow<T: Real>(&self, n: u32, a: T, x: &Point<T>) -> Result<Point<T>> {
        let lag = self.frame == Frame::Lagrangian;
        let np1 = T::from_usize_lossy(n as usize + 1);
        let np3 = T::from_usize_lossy(n as usize + 3);
        let e = a.exp();
        let mut y = *x;
        match self.id {
            GeneratorId::X1 => y.t = x.t + a,
            GeneratorId::X2 => {
                y.t = x.t * e;
                y.r = x.r * e;
                if lag {
                    y.s = x.s * (np1 * a).exp();
                }
            }
            GeneratorId::X3 => {
                y.t = x.t * e * e;
                y.r = x.r * e;
                y.u = x.u / e;
                y.rho = x.rho * e * e;
                if lag {
                    y.s = x.s * (np3 * a).exp();
                }
            }
            GeneratorId::X4 => {
                y.rho = x.rho * e;
                y.p = x.p * e;
                if lag {
                    y.s = x.s * e;
                }
            }
            GeneratorId::SpaceTranslation => y.r = x.r + a,
            GeneratorId::Galilean => {
                y.r = x.r + a * x.t;
                y.u = x.u + a;
            }
            GeneratorId::Projective => {
                let big_a = T::one() - a * x.t;
                if !(big_a > T::zero()) {
                    return Err(domain(format!(
                        "projective flow singular: 1 - a t = {big_a} at t = {}",
                        x.t
                    )));
                }
                y.t = x.t / big_a;
                y.r = x.r / big_a;
                y.u = x.u * big_a + a * x.r;
                y.rho = x.rho * big_a.powi(n as i32 + 1);
                y.p = x.p * big_a.powi(n as i32 + 3);
            }
            GeneratorId::X0 => {
                if lag {
                    y.s = x.s + a;
                }
            }
        }
        Ok(y)
    }

    /// Integrates `dz/da = ξ(z)` with classical Runge-Kutta; the independent oracle for [`flow`](Self::flow).
    pub fn numeric_flow<T: Real>(&self, n: u32, a: T, x: &Point<T>, steps: usize) -> Point<T> {
        let h = a / T::from_usize_lossy(steps.max(1));
        let add = |p: &Point<T>, k: &Point<T>, c: T| Point {
            t: p.t + c * k.t,
            s: p.s + c * k.s,
            r: p.r + c * k.r,
            u: p.u + c * k.u,
            rho: p.rho + c * k.rho,
            p: p.p + c * k.p,
        };
        let half = T::lit(0.5);
        let sixth = T::one() / T::lit(6.0);
        let two = T::lit(2.0);
        let mut z = *x;
        for _ in 0..steps.max(1) {
            let k1 = self.coefficients(n, &z);
            let k2 = self.coefficients(n, &add(&z, &k1, half * h));
            let k3 = self.coefficients(n, &add(&z, &k2, half * h));
            let k4 = self.coefficients(n, &add(&z, &k3, h));
            let sum = Point {
                t: k1.t + two * k2.t + two * k3.t + k4.t,
                s: k1.s + two * k2.s + two * k3.s + k4.s,
                r: k1.r + two * k2.r + two * k3.r + k4.r,
                u: k1.u + two * k2.u + two * k3.u + k4.u,
                rho: k1.rho + two * k2.rho + two * k3.rho + k4.rho,
                p: k1.p + two * k2.p + two * k3.p + k4.p,
            };
            z = add(&z, &sum, h * sixth);
        }
        z
    }
}

/// Discrete orthogonality criterion `D_{+h}(ξ^t) = -D_{+τ}(ξ^x)` on an orthogonal lattice in
/// `(t, x)`, with `x = s` in the Lagrangian frame and `x = r` in the Eulerian frame.
///
/// Evaluated on `samples` pseudo-random lattice cells; true when it holds on all of them to 1e-12.
pub fn mesh_orthogonality_criterion(gen: &Generator, n: u32, samples: usize, seed: u64) -> bool {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..samples.max(1)).all(|_| {
        let t = rng.gen_range(0.1..2.0);
        let x = rng.gen_range(0.1..2.0);
        let tau = rng.gen_range(0.01..0.5);
        let h = rng.gen_range(0.01..0.5);
        let mut base = Point {
            t,
            s: x,
            r: x,
            u: rng.gen_range(-1.0..1.0),
            rho: rng.gen_range(0.5..2.0),
            p: rng.gen_range(0.5..2.0),
        };
        let at = |tt: f64, xx: f64, base: &mut Point<f64>| {
            base.t = tt;
            base.s = xx;
            base.r = xx;
            gen.coefficients(n, base)
        };
        let c00 = at(t, x, &mut base);
        let c01 = at(t, x + h, &mut base);
        let c10 = at(t + tau, x, &mut base);
        let (xi_x0, xi_x1) = match gen.frame {
            Frame::Lagrangian => (c00.s, c10.s),
            Frame::Eulerian => (c00.r, c10.r),
        };
        let lhs = (c01.t - c00.t) / h;
        let rhs = -(xi_x1 - xi_x0) / tau;
        (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Point<f64> {
        Point { t: 0.3, s: 0.7, r: 1.1, u: -0.4, rho: 1.3, p: 0.8 }
    }

    #[test]
    fn closed_form_flows_match_numeric_integration() {
        for frame in [Frame::Lagrangian, Frame::Eulerian] {
            for id in GeneratorId::ALL {
                for n in 0..3 {
                    let g = Generator { id, frame };
                    for a in [-0.7, 0.4, 1.0] {
                        let exact = g.flow(n, a, &sample()).unwrap();
                        let num = g.numeric_flow(n, a, &sample(), 2000);
                        for (u, v) in [
                            (exact.t, num.t),
                            (exact.s, num.s),
                            (exact.r, num.r),
                            (exact.u, num.u),
                            (exact.rho, num.rho),
                            (exact.p, num.p),
                        ] {
                            assert!((u - v).abs() < 1e-10 * (1.0 + u.abs()), "{id} {frame:?} n={n} a={a}: {u} vs {v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn flow_examples() {
        let g = Generator::lagrangian(GeneratorId::X1);
        let y = g.flow(0, 5.0, &sample()).unwrap();
        assert_eq!(y.t, 5.3);
        assert_eq!((y.r, y.u, y.rho, y.p), (1.1, -0.4, 1.3, 0.8));
        let mut x = sample();
        x.t = 0.0;
        x.u = 0.0;
        let y = Generator::lagrangian(GeneratorId::Galilean).flow(0, 2.0, &x).unwrap();
        assert_eq!((y.u, y.r), (2.0, 1.1));
        let y = Generator::lagrangian(GeneratorId::Projective).flow(1, 0.5, &x).unwrap();
        assert_eq!((y.t, y.r, y.rho, y.p), (0.0, 1.1, 1.3, 0.8));
        assert!((y.u - 0.55).abs() < 1e-15);
        let mut late = sample();
        late.t = 4.0;
        assert!(Generator::lagrangian(GeneratorId::Projective).flow(0, 0.5, &late).is_err());
    }

    #[test]
    fn orthogonality_verdicts() {
        for n in 0..3 {
            for id in GeneratorId::ALL {
                assert!(mesh_orthogonality_criterion(&Generator::lagrangian(id), n, 50, 7), "{id}");
            }
        }
        assert!(!mesh_orthogonality_criterion(&Generator::eulerian(GeneratorId::Galilean), 0, 50, 7));
        assert!(!mesh_orthogonality_criterion(&Generator::eulerian(GeneratorId::Projective), 0, 50, 7));
        assert!(mesh_orthogonality_criterion(&Generator::eulerian(GeneratorId::X1), 0, 50, 7));
        assert!(mesh_orthogonality_criterion(&Generator::eulerian(GeneratorId::X2), 0, 50, 7));
    }

    #[test]
    fn parse_aliases() {
        assert_eq!("x7".parse::<GeneratorId>().unwrap(), GeneratorId::Projective);
        assert_eq!("Galilean".parse::<GeneratorId>().unwrap(), GeneratorId::Galilean);
        assert!("x9".parse::<GeneratorId>().is_err());
    }
}
