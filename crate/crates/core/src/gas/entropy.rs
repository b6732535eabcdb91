//! Entropy profiles `S(s)` along the mass coordinate.
//!
//! The four classification cases are an arbitrary profile (represented here by tabulated data),
//! a constant, a power law `A0 s^q` and an exponential `A0 e^{qs}`.

use crate::error::{argument, domain, GasError, Result};
use crate::num::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum EntropyProfile<T> {
    Constant { a0: T },
    /// `A0 s^q`, defined for `s > 0`.
    Power { a0: T, q: T },
    Exponential { a0: T, q: T },
    Tabulated(MonotoneCubic<T>),
}

/// Which of the four classification cases a profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyCase {
    Arbitrary,
    Isentropic,
    Power,
    Exponential,
}

impl<T: Real> EntropyProfile<T> {
    pub fn constant(a0: T) -> Result<Self> {
        check_amplitude(a0)?;
        Ok(Self::Constant { a0 })
    }

    pub fn power(a0: T, q: T) -> Result<Self> {
        check_amplitude(a0)?;
        check_exponent(q)?;
        Ok(Self::Power { a0, q })
    }

    pub fn exponential(a0: T, q: T) -> Result<Self> {
        check_amplitude(a0)?;
        check_exponent(q)?;
        Ok(Self::Exponential { a0, q })
    }

    pub fn tabulated(s: Vec<T>, values: Vec<T>) -> Result<Self> {
        if values.iter().any(|&v| !(v > T::zero())) {
            return Err(domain("tabulated entropy values must be positive"));
        }
        Ok(Self::Tabulated(MonotoneCubic::new(s, values)?))
    }

    pub fn case(&self) -> EntropyCase {
        match self {
            Self::Constant { .. } => EntropyCase::Isentropic,
            Self::Power { .. } => EntropyCase::Power,
            Self::Exponential { .. } => EntropyCase::Exponential,
            Self::Tabulated(_) => EntropyCase::Arbitrary,
        }
    }

    /// Exponent `q` of the power and exponential cases.
    pub fn exponent(&self) -> Option<T> {
        match self {
            Self::Power { q, .. } | Self::Exponential { q, .. } => Some(*q),
            _ => None,
        }
    }

    /// `(S(s), S'(s))`.
    pub fn eval(&self, s: T) -> Result<(T, T)> {
        match self {
            Self::Constant { a0 } => Ok((*a0, T::zero())),
            Self::Power { a0, q } => {
                if !(s > T::zero()) {
                    return Err(GasError::Range(format!("power entropy requires s > 0, got {s}")));
                }
                let v = *a0 * s.powf(*q);
                Ok((v, *q * v / s))
            }
            Self::Exponential { a0, q } => {
                let v = *a0 * (*q * s).exp();
                Ok((v, *q * v))
            }
            Self::Tabulated(table) => table.eval(s),
        }
    }

    pub fn value(&self, s: T) -> Result<T> {
        self.eval(s).map(|(v, _)| v)
    }
}

fn check_amplitude<T: Real>(a0: T) -> Result<()> {
    if !(a0 > T::zero()) || !a0.is_finite() {
        return Err(domain(format!("entropy amplitude must be positive, got {a0}")));
    }
    Ok(())
}

fn check_exponent<T: Real>(q: T) -> Result<()> {
    if q == T::zero() || !q.is_finite() {
        return Err(argument("entropy exponent q must be finite and non-zero"));
    }
    Ok(())
}

/// Fritsch-Carlson monotone piecewise cubic Hermite interpolant with analytic derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic<T> {
    x: Vec<T>,
    y: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Real> MonotoneCubic<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(argument("abscissae and ordinates differ in length"));
        }
        if x.len() < 2 {
            return Err(argument("at least two samples are required"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(argument("sample abscissae must be strictly increasing"));
        }
        let m = x.len();
        let secants: Vec<T> = (0..m - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
        let mut slopes = vec![T::zero(); m];
        if m == 2 {
            slopes[0] = secants[0];
            slopes[1] = secants[0];
        } else {
            let two = T::lit(2.0);
            for k in 1..m - 1 {
                let (d0, d1) = (secants[k - 1], secants[k]);
                if d0 * d1 > T::zero() {
                    // weighted harmonic mean (Fritsch-Butland form)
                    let h0 = x[k] - x[k - 1];
                    let h1 = x[k + 1] - x[k];
                    let w1 = two * h1 + h0;
                    let w2 = h1 + two * h0;
                    slopes[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
                }
            }
            slopes[0] = end_slope(x[1] - x[0], x[2] - x[1], secants[0], secants[1]);
            slopes[m - 1] = end_slope(
                x[m - 1] - x[m - 2],
                x[m - 2] - x[m - 3],
                secants[m - 2],
                secants[m - 3],
            );
        }
        Ok(Self { x, y, slopes })
    }

    pub fn domain(&self) -> (T, T) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn eval(&self, s: T) -> Result<(T, T)> {
        let (lo, hi) = self.domain();
        if !(s >= lo && s <= hi) {
            return Err(GasError::Range(format!("s={s} outside tabulated range [{lo}, {hi}]")));
        }
        let k = match self.x.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
            Ok(k) => k.min(self.x.len() - 2),
            Err(k) => k - 1,
        };
        let h = self.x[k + 1] - self.x[k];
        let t = (s - self.x[k]) / h;
        let (y0, y1, m0, m1) = (self.y[k], self.y[k + 1], self.slopes[k], self.slopes[k + 1]);
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let six = T::lit(6.0);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = two * t3 - three * t2 + one;
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        let value = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
        let d00 = six * t2 - six * t;
        let d10 = three * t2 - T::lit(4.0) * t + one;
        let d01 = -six * t2 + six * t;
        let d11 = three * t2 - two * t;
        let deriv = (d00 * y0 + d01 * y1) / h + d10 * m0 + d11 * m1;
        Ok((value, deriv))
    }
}

/// Shape-preserving three-point end slope.
fn end_slope<T: Real>(h0: T, h1: T, d0: T, d1: T) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let d = ((two * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= T::zero() {
        T::zero()
    } else if d0 * d1 <= T::zero() && d.abs() > (three * d0).abs() {
        three * d0
    } else {
        d
    }
}

/// Maximum over `samples` of `|(alpha s + beta) S'(s) - q S(s)| / max(1, |S(s)|)`.
pub fn check_classifying_equation<T: Real>(
    profile: &EntropyProfile<T>,
    alpha: T,
    beta: T,
    q: T,
    samples: &[T],
) -> Result<T> {
    if samples.is_empty() {
        return Err(argument("classifying-equation check needs at least one sample"));
    }
    let mut worst = T::zero();
    for &s in samples {
        let (v, dv) = profile.eval(s)?;
        let r = ((alpha * s + beta) * dv - q * v).abs() / v.abs().max(T::one());
        worst = worst.max(r);
    }
    Ok(worst)
}
