//! Galerkin semidiscretisations: the time derivative of the coefficient
//! vectors for each formulation.

mod options;
mod scheme;

pub use options::{Discretization, FluxForm, MeshSpec, SourceMode, DEFAULT_DEPTH_FLOOR};
pub use scheme::{Scheme, SimState};
