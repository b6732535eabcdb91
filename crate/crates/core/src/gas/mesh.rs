use crate::error::{argument, Result};
use crate::num::Real;

/// Relative tolerance for the uniform-spacing check.
pub const UNIFORM_TOL: f64 = 1e-12;

/// Uniform mass-coordinate mesh plus the current time level and step.
///
/// Node `i` sits at `s_nodes[i]`; cell `i` (stored at integer offset `i`) is the interval
/// `[s_i, s_{i+1}]` whose midpoint carries the label `i + 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMesh<T> {
    pub s_nodes: Vec<T>,
    pub hs: T,
    pub t: T,
    pub tau: T,
}

impl<T: Real> MassMesh<T> {
    pub fn uniform(s_min: T, s_max: T, cells: usize, t: T, tau: T) -> Result<Self> {
        if cells == 0 {
            return Err(argument("mesh needs at least one cell"));
        }
        if !(s_max > s_min) {
            return Err(argument("mass range must be increasing"));
        }
        let hs = (s_max - s_min) / T::from_usize_lossy(cells);
        let s_nodes = (0..=cells)
            .map(|i| s_min + hs * T::from_usize_lossy(i))
            .collect();
        Self::from_nodes(s_nodes, t, tau)
    }

    pub fn from_nodes(s_nodes: Vec<T>, t: T, tau: T) -> Result<Self> {
        if s_nodes.len() < 2 {
            return Err(argument("mesh needs at least two nodes"));
        }
        let cells = s_nodes.len() - 1;
        let hs = (s_nodes[cells] - s_nodes[0]) / T::from_usize_lossy(cells);
        if !(hs > T::zero()) {
            return Err(argument("mass spacing must be positive"));
        }
        let tol = T::lit(UNIFORM_TOL) * hs;
        if s_nodes.windows(2).any(|w| ((w[1] - w[0]) - hs).abs() > tol) {
            return Err(argument("mass mesh must be uniform"));
        }
        if !(tau > T::zero()) {
            return Err(argument(format!("time step must be positive, got {tau}")));
        }
        Ok(Self { s_nodes, hs, t, tau })
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.s_nodes.len() - 1
    }

    #[inline]
    pub fn nodes(&self) -> usize {
        self.s_nodes.len()
    }

    /// Mass coordinate of the midpoint of cell `i` (label `i + 1/2`).
    #[inline]
    pub fn s_cell(&self, i: usize) -> T {
        T::lit(0.5) * (self.s_nodes[i] + self.s_nodes[i + 1])
    }

    pub fn total_mass(&self) -> T {
        self.s_nodes[self.cells()] - self.s_nodes[0]
    }

    /// Same mesh with a different time level / step.
    pub fn at(&self, t: T, tau: T) -> Self {
        Self {
            s_nodes: self.s_nodes.clone(),
            hs: self.hs,
            t,
            tau,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh() {
        let m = MassMesh::uniform(0.0_f64, 1.0, 10, 0.0, 0.01).unwrap();
        assert_eq!(m.cells(), 10);
        assert!((m.hs - 0.1).abs() < 1e-16);
        assert!((m.s_cell(0) - 0.05).abs() < 1e-16);
    }

    #[test]
    fn rejects_nonuniform_and_bad_step() {
        assert!(MassMesh::from_nodes(vec![0.0, 0.1, 0.3], 0.0, 0.1).is_err());
        assert!(MassMesh::uniform(0.0, 1.0, 4, 0.0, 0.0).is_err());
        assert!(MassMesh::uniform(1.0, 1.0, 4, 0.0, 0.1).is_err());
    }
}
