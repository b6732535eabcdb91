use crate::error::{domain, GasError, Result};
use crate::num::Real;

/// Relative tolerance used to decide whether `gamma` equals the special exponent `(n+3)/(n+1)`.
pub const GAMMA_STAR_TOL: f64 = 1e-12;

/// Symmetry index `n` (0 plane, 1 cylindrical, 2 spherical) and adiabatic exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel<T> {
    n: u32,
    gamma: T,
}

impl<T: Real> GasModel<T> {
    pub fn new(n: u32, gamma: T) -> Result<Self> {
        if n > 2 {
            return Err(GasError::Argument(format!("dimension index n={n} not in {{0,1,2}}")));
        }
        if !(gamma > T::one()) || !gamma.is_finite() {
            return Err(domain(format!("adiabatic exponent must exceed 1, got {gamma}")));
        }
        Ok(Self { n, gamma })
    }

    /// Gas with the special exponent `(n+3)/(n+1)`.
    pub fn with_gamma_star(n: u32) -> Result<Self> {
        Self::new(n, gamma_star(n))
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn gamma(&self) -> T {
        self.gamma
    }

    #[inline]
    pub fn gamma_star(&self) -> T {
        gamma_star(self.n)
    }

    pub fn is_gamma_star(&self) -> bool {
        let gs = self.gamma_star();
        (self.gamma - gs).abs() <= T::lit(GAMMA_STAR_TOL) * gs
    }

    /// `n + 1` as a scalar.
    #[inline]
    pub fn np1(&self) -> T {
        T::from_usize_lossy(self.n as usize + 1)
    }

    #[inline]
    pub fn n_real(&self) -> T {
        T::from_usize_lossy(self.n as usize)
    }
}

/// `(n+3)/(n+1)`: 3, 2 and 5/3 for n = 0, 1, 2.
pub fn gamma_star<T: Real>(n: u32) -> T {
    T::from_usize_lossy(n as usize + 3) / T::from_usize_lossy(n as usize + 1)
}

/// Polytropic specific internal energy `p / ((gamma - 1) rho)`.
pub fn specific_internal_energy<T: Real>(rho: T, p: T, gas: &GasModel<T>) -> Result<T> {
    if !(rho > T::zero()) {
        return Err(domain(format!("density must be positive, got {rho}")));
    }
    if p < T::zero() || p.is_nan() {
        return Err(domain(format!("pressure must be non-negative, got {p}")));
    }
    Ok(p / ((gas.gamma() - T::one()) * rho))
}

/// Entropy variable `S = p / rho^gamma`.
pub fn entropy_variable<T: Real>(rho: T, p: T, gas: &GasModel<T>) -> Result<T> {
    if !(rho > T::zero()) {
        return Err(domain(format!("density must be positive, got {rho}")));
    }
    Ok(p / rho.powf(gas.gamma()))
}

/// Adiabatic sound speed `sqrt(gamma p / rho)`.
#[inline]
pub fn sound_speed<T: Real>(rho: T, p: T, gas: &GasModel<T>) -> T {
    (gas.gamma() * p / rho).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_star_values() {
        assert_eq!(gamma_star::<f64>(0), 3.0);
        assert_eq!(gamma_star::<f64>(1), 2.0);
        assert_eq!(gamma_star::<f64>(2), 5.0 / 3.0);
        assert!(GasModel::<f64>::with_gamma_star(2).unwrap().is_gamma_star());
        assert!(!GasModel::new(2, 1.4_f64).unwrap().is_gamma_star());
    }

    #[test]
    fn rejects_bad_models() {
        assert!(GasModel::new(3, 1.4_f64).is_err());
        assert!(GasModel::new(0, 1.0_f64).is_err());
        assert!(GasModel::new(0, 0.5_f64).is_err());
    }

    #[test]
    fn internal_energy_examples() {
        let g14 = GasModel::new(0, 1.4_f64).unwrap();
        let g3 = GasModel::new(0, 3.0_f64).unwrap();
        assert!((specific_internal_energy(1.0, 1.0, &g14).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(specific_internal_energy(2.0, 0.0, &g3).unwrap(), 0.0);
        assert!((specific_internal_energy(0.5, 3.0, &g3).unwrap() - 3.0).abs() < 1e-15);
        assert!(specific_internal_energy(0.0, 1.0, &g3).is_err());
        assert!(specific_internal_energy(1.0, -1.0, &g3).is_err());
    }

    #[test]
    fn entropy_variable_examples() {
        for gamma in [1.2, 1.4, 3.0] {
            let g = GasModel::new(1, gamma).unwrap();
            assert_eq!(entropy_variable(1.0, 1.0, &g).unwrap(), 1.0);
        }
        let g3 = GasModel::new(0, 3.0_f64).unwrap();
        let g2 = GasModel::new(0, 2.0_f64).unwrap();
        assert!((entropy_variable(2.0, 8.0, &g3).unwrap() - 1.0).abs() < 1e-15);
        assert!((entropy_variable(2.0, 4.0, &g2).unwrap() - 1.0).abs() < 1e-15);
        assert!(entropy_variable(-1.0, 4.0, &g2).is_err());
    }
}
