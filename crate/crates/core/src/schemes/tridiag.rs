//! Banded solvers for the Newton corrections.

use crate::error::{GasError, Result};
use crate::num::Real;

fn singular() -> GasError {
    GasError::SingularConstraint("zero pivot in tridiagonal solve".into())
}

/// Thomas algorithm for `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i`; `a[0]` and `c[m-1]` are ignored.
pub fn solve_tridiagonal<T: Real>(a: &[T], b: &[T], c: &[T], d: &[T]) -> Result<Vec<T>> {
    let m = b.len();
    if a.len() != m || c.len() != m || d.len() != m || m == 0 {
        return Err(GasError::Argument("tridiagonal bands must share a non-zero length".into()));
    }
    let mut cp = vec![T::zero(); m];
    let mut dp = vec![T::zero(); m];
    let mut piv = b[0];
    if piv == T::zero() || !piv.is_finite() {
        return Err(singular());
    }
    cp[0] = c[0] / piv;
    dp[0] = d[0] / piv;
    for i in 1..m {
        piv = b[i] - a[i] * cp[i - 1];
        if piv == T::zero() || !piv.is_finite() {
            return Err(singular());
        }
        cp[i] = c[i] / piv;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / piv;
    }
    let mut x = dp;
    for i in (0..m - 1).rev() {
        let next = x[i + 1];
        x[i] = x[i] - cp[i] * next;
    }
    Ok(x)
}

/// Periodic tridiagonal system: `a[0]` couples row 0 to `x[m-1]` and `c[m-1]` couples the last row
/// to `x[0]`. Solved with the Sherman-Morrison correction of a Thomas solve.
pub fn solve_cyclic_tridiagonal<T: Real>(a: &[T], b: &[T], c: &[T], d: &[T]) -> Result<Vec<T>> {
    let m = b.len();
    if a.len() != m || c.len() != m || d.len() != m {
        return Err(GasError::Argument("tridiagonal bands must share a length".into()));
    }
    if m < 3 {
        return Err(GasError::Argument("cyclic solve needs at least three unknowns".into()));
    }
    let alpha = c[m - 1];
    let beta = a[0];
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[m - 1] = b[m - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(a, &bb, c, d)?;
    let mut uvec = vec![T::zero(); m];
    uvec[0] = gamma;
    uvec[m - 1] = alpha;
    let z = solve_tridiagonal(a, &bb, c, &uvec)?;
    let denom = T::one() + z[0] + beta * z[m - 1] / gamma;
    if denom == T::zero() {
        return Err(singular());
    }
    let fact = (x[0] + beta * x[m - 1] / gamma) / denom;
    Ok(x.iter().zip(&z).map(|(&xi, &zi)| xi - fact * zi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(a: &[f64], b: &[f64], c: &[f64], x: &[f64], cyclic: bool) -> Vec<f64> {
        let m = b.len();
        (0..m)
            .map(|i| {
                let mut v = b[i] * x[i];
                if i > 0 {
                    v += a[i] * x[i - 1];
                } else if cyclic {
                    v += a[0] * x[m - 1];
                }
                if i + 1 < m {
                    v += c[i] * x[i + 1];
                } else if cyclic {
                    v += c[m - 1] * x[0];
                }
                v
            })
            .collect()
    }

    proptest! {
        #[test]
        fn thomas_solves_dominant_systems(
            rows in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -5.0f64..5.0), 1..40)
        ) {
            let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let c: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let b: Vec<f64> = rows.iter().map(|r| 3.0 + r.0.abs() + r.1.abs()).collect();
            let d: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let x = solve_tridiagonal(&a, &b, &c, &d).unwrap();
            let back = apply(&a, &b, &c, &x, false);
            for (u, v) in back.iter().zip(&d) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }

        #[test]
        fn cyclic_solves_dominant_systems(
            rows in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -5.0f64..5.0), 3..40)
        ) {
            let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let c: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let b: Vec<f64> = rows.iter().map(|r| 3.0 + r.0.abs() + r.1.abs()).collect();
            let d: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let x = solve_cyclic_tridiagonal(&a, &b, &c, &d).unwrap();
            let back = apply(&a, &b, &c, &x, true);
            for (u, v) in back.iter().zip(&d) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let r = solve_tridiagonal(&[0.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]);
        assert!(matches!(r, Err(GasError::SingularConstraint(_))));
    }
}
