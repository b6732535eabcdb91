//! Lie point symmetries, the two-layer stencil, finite-difference invariants and invariance checks.

mod generators;
mod invariance;
mod invariants;
mod stencil;

pub use generators::{mesh_orthogonality_criterion, Frame, Generator, GeneratorId, Point};
pub use invariance::{scheme_invariance_check, transform_layer, InvarianceReport, SolutionSegment};
pub use invariants::{
    compute_invariants, explicit_direct_equations, invariant_form_equations, max_relative_residual,
    relative_residual, sp_direct_equations, Equations, InvariantSet, InvariantVector,
};
pub use stencil::{Stencil, STENCIL_DIM};
