//! Physical parameters, entropy profiles, the staggered mass mesh and flow-state storage.

mod entropy;
mod mesh;
mod model;
mod state;

pub use entropy::{check_classifying_equation, EntropyCase, EntropyProfile, MonotoneCubic};
pub use mesh::{MassMesh, UNIFORM_TOL};
pub use model::{entropy_variable, gamma_star, sound_speed, specific_internal_energy, GasModel, GAMMA_STAR_TOL};
pub use state::{init_state, FlowState, FnProfile, InitialProfile};

/// `(S(s), S'(s))` for a profile.
pub fn eval_entropy<T: crate::num::Real>(profile: &EntropyProfile<T>, s: T) -> crate::Result<(T, T)> {
    profile.eval(s)
}
