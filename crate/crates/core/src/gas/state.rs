use crate::error::{domain, Result};
use crate::gas::{entropy_variable, specific_internal_energy, GasModel, MassMesh};
use crate::num::{powi, Real};

/// Staggered snapshot at one time level.
///
/// Node arrays `r`, `u` have length `N + 1`; cell arrays `rho`, `p`, `eps` have length `N`,
/// with entry `i` holding the value at the half-integer label `i + 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState<T> {
    pub r: Vec<T>,
    pub u: Vec<T>,
    pub rho: Vec<T>,
    pub p: Vec<T>,
    pub eps: Vec<T>,
}

/// Closed-form initial data as functions of the mass coordinate.
pub trait InitialProfile<T: Real> {
    fn rho(&self, s: T) -> T;
    fn u(&self, s: T) -> T;
    fn p(&self, s: T) -> T;
}

/// Initial profile assembled from three closures.
pub struct FnProfile<R, U, P> {
    pub rho: R,
    pub u: U,
    pub p: P,
}

impl<T, R, U, P> InitialProfile<T> for FnProfile<R, U, P>
where
    T: Real,
    R: Fn(T) -> T,
    U: Fn(T) -> T,
    P: Fn(T) -> T,
{
    fn rho(&self, s: T) -> T {
        (self.rho)(s)
    }
    fn u(&self, s: T) -> T {
        (self.u)(s)
    }
    fn p(&self, s: T) -> T {
        (self.p)(s)
    }
}

impl<T: Real> FlowState<T> {
    #[inline]
    pub fn cells(&self) -> usize {
        self.rho.len()
    }

    /// Checks array lengths, positivity and node ordering.
    pub fn validate(&self, gas: &GasModel<T>) -> Result<()> {
        let n = self.cells();
        if n == 0 || self.r.len() != n + 1 || self.u.len() != n + 1 || self.p.len() != n || self.eps.len() != n {
            return Err(domain("inconsistent flow-state array lengths"));
        }
        if let Some(i) = self.rho.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(domain(format!("non-positive density in cell {i}")));
        }
        if let Some(i) = self.p.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(domain(format!("non-positive pressure in cell {i}")));
        }
        if self.r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("node positions are not strictly increasing"));
        }
        if gas.n() >= 1 && self.r[0] < T::zero() {
            return Err(domain("negative radius"));
        }
        if self.u.iter().any(|v| !v.is_finite()) {
            return Err(domain("non-finite velocity"));
        }
        Ok(())
    }

    /// Cell entropy variable `p / rho^gamma`.
    pub fn entropy(&self, gas: &GasModel<T>) -> Vec<T> {
        self.rho
            .iter()
            .zip(&self.p)
            .map(|(&rho, &p)| p / rho.powf(gas.gamma()))
            .collect()
    }

    /// `max_i |rho_{i+1/2} (r_{i+1}^{n+1} - r_i^{n+1}) / (n+1) - h|` divided by `h`.
    pub fn mass_consistency_error(&self, mesh: &MassMesh<T>, gas: &GasModel<T>) -> T {
        let np1 = gas.n() + 1;
        let inv = T::one() / gas.np1();
        (0..self.cells())
            .map(|i| {
                let vol = (powi(self.r[i + 1], np1) - powi(self.r[i], np1)) * inv;
                (self.rho[i] * vol - mesh.hs).abs() / mesh.hs
            })
            .fold(T::zero(), T::max)
    }

    /// Recomputes `eps` from the polytropic equation of state.
    pub fn refresh_internal_energy(&mut self, gas: &GasModel<T>) -> Result<()> {
        for i in 0..self.cells() {
            self.eps[i] = specific_internal_energy(self.rho[i], self.p[i], gas)?;
        }
        Ok(())
    }
}

/// Builds the discrete initial layer: `u` sampled at nodes, `rho` and `p` at cell midpoints, and
/// node radii from the exact cell-volume recursion starting at `r_origin`.
pub fn init_state<T: Real, P: InitialProfile<T> + ?Sized>(
    profile: &P,
    mesh: &MassMesh<T>,
    gas: &GasModel<T>,
    r_origin: T,
) -> Result<FlowState<T>> {
    if gas.n() >= 1 && r_origin < T::zero() {
        return Err(domain(format!("inner radius must be non-negative, got {r_origin}")));
    }
    let cells = mesh.cells();
    let np1 = gas.n() + 1;
    let np1r = gas.np1();
    let mut rho = Vec::with_capacity(cells);
    let mut p = Vec::with_capacity(cells);
    let mut eps = Vec::with_capacity(cells);
    for i in 0..cells {
        let s = mesh.s_cell(i);
        let (ri, pi) = (profile.rho(s), profile.p(s));
        if !(ri > T::zero()) || !(pi > T::zero()) {
            return Err(domain(format!("initial density and pressure must be positive at s={s}")));
        }
        // validates the entropy variable as well
        entropy_variable(ri, pi, gas)?;
        eps.push(specific_internal_energy(ri, pi, gas)?);
        rho.push(ri);
        p.push(pi);
    }
    let u: Vec<T> = mesh.s_nodes.iter().map(|&s| profile.u(s)).collect();
    let mut r = Vec::with_capacity(cells + 1);
    r.push(r_origin);
    let mut vol = powi(r_origin, np1);
    for i in 0..cells {
        vol = vol + np1r * mesh.hs / rho[i];
        let next = match gas.n() {
            0 => r[i] + mesh.hs / rho[i],
            1 => vol.sqrt(),
            _ => vol.cbrt(),
        };
        r.push(next);
    }
    Ok(FlowState { r, u, rho, p, eps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(rho: f64) -> FnProfile<impl Fn(f64) -> f64, impl Fn(f64) -> f64, impl Fn(f64) -> f64> {
        FnProfile {
            rho: move |_| rho,
            u: |_| 0.0,
            p: |_| 1.0,
        }
    }

    #[test]
    fn slab_positions() {
        let mesh = MassMesh::uniform(0.0, 1.0, 10, 0.0, 0.01).unwrap();
        let gas = GasModel::new(0, 1.4).unwrap();
        let st = init_state(&uniform(1.0), &mesh, &gas, 0.0).unwrap();
        for (i, r) in st.r.iter().enumerate() {
            assert!((r - 0.1 * i as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn spherical_and_cylindrical_positions() {
        let gas = GasModel::new(2, 1.4).unwrap();
        let mesh = MassMesh::uniform(0.0, 1.0 / 3.0, 1, 0.0, 0.01).unwrap();
        let st = init_state(&uniform(1.0), &mesh, &gas, 0.0).unwrap();
        assert!((st.r[1] - 1.0).abs() < 1e-15);

        let gas = GasModel::new(1, 1.4).unwrap();
        let mesh = MassMesh::uniform(0.0, 1.0, 1, 0.0, 0.01).unwrap();
        let st = init_state(&uniform(2.0), &mesh, &gas, 1.0).unwrap();
        assert!((st.r[1] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mass_consistency_holds() {
        for n in 0..3 {
            let gas = GasModel::new(n, 1.4).unwrap();
            let mesh = MassMesh::uniform(0.0, 1.0, 64, 0.0, 0.01).unwrap();
            let prof = FnProfile {
                rho: |s: f64| 1.0 + 0.3 * (3.0 * s).sin(),
                u: |s: f64| s * (1.0 - s),
                p: |s: f64| 1.0 + 0.2 * s,
            };
            let st = init_state(&prof, &mesh, &gas, 0.0).unwrap();
            st.validate(&gas).unwrap();
            assert!(st.mass_consistency_error(&mesh, &gas) <= 1e-13);
        }
    }

    #[test]
    fn rejects_nonpositive_preset() {
        let gas = GasModel::new(0, 1.4).unwrap();
        let mesh = MassMesh::uniform(0.0, 1.0, 4, 0.0, 0.01).unwrap();
        let prof = FnProfile {
            rho: |_| 1.0,
            u: |_| 0.0,
            p: |s: f64| s - 0.5,
        };
        assert!(init_state(&prof, &mesh, &gas, 0.0).is_err());
    }
}
