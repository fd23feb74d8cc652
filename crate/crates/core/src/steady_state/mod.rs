//! Exact steady flows over a variable bottom.

mod preservation;
mod profile;

pub use preservation::{steady_config, steady_preservation_test, PreservationReport};
pub use profile::{solve_steady, solve_steady_on, Branch, SteadyProfile};
