//! Catalogue of conservation laws and the checks that verify them.

pub mod fd;
pub mod field;
pub mod inhomogeneous;
pub mod laws;
pub mod noether;

pub use field::{Domain, FieldJet, SmoothField, TrigField};
pub use inhomogeneous::{inhomogeneous_identity_residual, EulerianFlow, InhomogeneousCheck, InhomogeneousLaw, RandomCase};
pub use laws::{
    applicable_laws, eulerian_density_convert, power_mass_coordinate, power_q_star, ConservationLaw, EulerianSample,
    GasPoint, LawContext, PhiPoint, SymmetryData,
};
pub use noether::{calibrate_sigma, euler_lagrange_residual, noether_identity_residual, NoetherCheck};
