pub mod assembly;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod mesh_space;
pub mod problems;
pub mod semidiscrete;
pub mod steady_state;
pub mod time_integration;

pub use error::{Error, LastState, Result};
