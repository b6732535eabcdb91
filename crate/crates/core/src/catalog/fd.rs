//! High-order central finite differences used by the identity checkers.

use crate::num::Real;

/// Sixth-order central first derivative of `f` at `x` with step `h`.
pub fn d1_central6<T: Real>(f: impl Fn(T) -> T, x: T, h: T) -> T {
    let c1 = T::lit(45.0);
    let c2 = T::lit(9.0);
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let num = c1 * (f(x + h) - f(x - h)) - c2 * (f(x + two * h) - f(x - two * h)) + (f(x + three * h) - f(x - three * h));
    num / (T::lit(60.0) * h)
}

/// Half-width of the [`d1_central6`] stencil in units of `h`.
pub const STENCIL_REACH: f64 = 3.0;
