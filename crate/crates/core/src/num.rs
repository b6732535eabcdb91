//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the solver and verification engine are generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Magnitude below which both operands of a ratio are treated as an exact zero.
pub const RATIO_ZERO_GUARD: f64 = 1e-300;

/// `num / den` with the `0/0 -> 1` limit used for ratio invariants of vanishing quantities.
///
/// Any other division by zero is returned as the (non-finite) IEEE result so the caller can flag it.
#[inline]
pub fn guarded_ratio<T: Real>(num: T, den: T) -> T {
    let guard = T::lit(RATIO_ZERO_GUARD);
    if num.abs() < guard && den.abs() < guard {
        T::one()
    } else {
        num / den
    }
}

/// Integer power for the small exponents used by the geometry factors.
#[inline]
pub fn powi<T: Real>(x: T, n: u32) -> T {
    match n {
        0 => T::one(),
        1 => x,
        2 => x * x,
        3 => x * x * x,
        _ => x.powi(n as i32),
    }
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
#[inline]
pub fn rel_diff<T: Real>(a: T, b: T, floor: T) -> T {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guarded_ratio_limits() {
        assert_eq!(guarded_ratio(0.0_f64, 0.0), 1.0);
        assert_eq!(guarded_ratio(1e-310_f64, -1e-305), 1.0);
        assert_eq!(guarded_ratio(2.0_f64, 4.0), 0.5);
        assert!(guarded_ratio(1.0_f64, 0.0).is_infinite());
    }

    #[test]
    fn small_powers_match_powi() {
        for n in 0..6 {
            assert_eq!(powi(1.7_f64, n), 1.7_f64.powi(n as i32));
        }
    }
}
