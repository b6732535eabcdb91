//! Smooth test motions `r = φ(t, s)` with analytic derivatives.

use rand::Rng;

use crate::num::Real;

/// `φ` and its derivatives up to second order at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldJet<T> {
    pub phi: T,
    pub phi_t: T,
    pub phi_s: T,
    pub phi_tt: T,
    pub phi_ts: T,
    pub phi_ss: T,
}

/// Rectangle `[t0, t1] x [s0, s1]` on which a field is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub t0: T,
    pub t1: T,
    pub s0: T,
    pub s1: T,
}

impl<T: Real> Domain<T> {
    pub fn contains(&self, t: T, s: T) -> bool {
        t >= self.t0 && t <= self.t1 && s >= self.s0 && s <= self.s1
    }
}

/// A smooth motion of the gas particles.
pub trait SmoothField<T: Real> {
    fn jet(&self, t: T, s: T) -> FieldJet<T>;
    fn domain(&self) -> Domain<T>;
}

/// `φ = base_n(s) + c t + Σ a_k sin(ω_k t + κ_k s + θ_k)`.
///
/// `base_n(s) = ((n+1) s)^{1/(n+1)}` is the static motion of unit density, so with `c = 0` and no
/// modes the field describes a gas at rest.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigField<T> {
    pub n: u32,
    pub velocity: T,
    /// `(a, ω, κ, θ)` per mode.
    pub modes: Vec<(T, T, T, T)>,
    pub domain: Domain<T>,
}

impl<T: Real> TrigField<T> {
    pub fn static_gas(n: u32, domain: Domain<T>) -> Self {
        Self { n, velocity: T::zero(), modes: Vec::new(), domain }
    }

    fn base(&self, s: T) -> (T, T, T) {
        let k = T::from_usize_lossy(self.n as usize + 1);
        if self.n == 0 {
            return (s, T::one(), T::zero());
        }
        let b = (k * s).powf(T::one() / k);
        // b^{n+1} = (n+1) s  =>  b' = b^{-n},  b'' = -n b^{-2n-1}
        let b1 = b.powi(-(self.n as i32));
        let b2 = -T::from_usize_lossy(self.n as usize) * b.powi(-(2 * self.n as i32 + 1));
        (b, b1, b2)
    }
}

impl<T: Real> SmoothField<T> for TrigField<T> {
    fn jet(&self, t: T, s: T) -> FieldJet<T> {
        let (b, b1, b2) = self.base(s);
        let mut j = FieldJet {
            phi: b + self.velocity * t,
            phi_t: self.velocity,
            phi_s: b1,
            phi_ss: b2,
            ..FieldJet::default()
        };
        for &(a, w, k, th) in &self.modes {
            let arg = w * t + k * s + th;
            let (sn, cs) = arg.sin_cos();
            j.phi = j.phi + a * sn;
            j.phi_t = j.phi_t + a * w * cs;
            j.phi_s = j.phi_s + a * k * cs;
            j.phi_tt = j.phi_tt - a * w * w * sn;
            j.phi_ts = j.phi_ts - a * w * k * sn;
            j.phi_ss = j.phi_ss - a * k * k * sn;
        }
        j
    }

    fn domain(&self) -> Domain<T> {
        self.domain
    }
}

impl TrigField<f64> {
    /// Generic non-solution field on `[0, 1] x [0.5, 1.5]` with `φ_s` bounded away from zero.
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Self {
        let modes = (0..3)
            .map(|_| {
                (
                    rng.gen_range(0.01..0.04),
                    rng.gen_range(-2.5..2.5),
                    rng.gen_range(-2.5..2.5),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        Self {
            n,
            // a drift bounded away from zero keeps time-translation characteristics of order one
            velocity: rng.gen_range(0.5..1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 },
            modes,
            domain: Domain { t0: 0.0, t1: 1.0, s0: 0.5, s1: 1.5 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fd::d1_central6;
    use rand::SeedableRng;

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for n in 0..3 {
            let f = TrigField::random(n, &mut rng);
            let (t, s, h) = (0.4, 0.9, 1e-3);
            let j = f.jet(t, s);
            assert!((d1_central6(|x| f.jet(x, s).phi, t, h) - j.phi_t).abs() < 1e-10);
            assert!((d1_central6(|x| f.jet(t, x).phi, s, h) - j.phi_s).abs() < 1e-10);
            assert!((d1_central6(|x| f.jet(x, s).phi_t, t, h) - j.phi_tt).abs() < 1e-10);
            assert!((d1_central6(|x| f.jet(t, x).phi_s, s, h) - j.phi_ss).abs() < 1e-10);
            assert!((d1_central6(|x| f.jet(x, s).phi_s, t, h) - j.phi_ts).abs() < 1e-10);
            assert!(j.phi_s > 0.0 && j.phi > 0.0);
        }
    }
}
