//! Conservative and symmetry-invariant difference schemes for one-dimensional polytropic gas
//! flow in mass-Lagrangian coordinates, with a verification engine for the associated
//! conservation laws and finite-difference invariants.
//!
//! Everything numerical is generic over [`num::Real`] (`f32` or `f64`); the `*64` aliases below
//! are the double-precision instantiations used by the CLI.

// `!(x > 0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod gas;
pub mod io;
pub mod monitors;
pub mod num;
pub mod schemes;
pub mod symmetry;

pub use error::{GasError, Result};

pub type GasModel64 = gas::GasModel<f64>;
pub type GasModel32 = gas::GasModel<f32>;
pub type FlowState64 = gas::FlowState<f64>;
pub type FlowState32 = gas::FlowState<f32>;
pub type MassMesh64 = gas::MassMesh<f64>;
pub type EntropyProfile64 = gas::EntropyProfile<f64>;
