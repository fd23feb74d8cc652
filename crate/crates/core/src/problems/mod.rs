//! Bottoms, constants, initial data and manufactured solutions.

mod bathymetry;
mod config;
mod criticality;
mod manufactured;

pub use bathymetry::{Bathymetry, CustomBottom};
pub use config::{
    Constants, Formulation, InitialData, InitialProfile, ProblemConfig, ScalarFn, EARTH_GRAVITY,
};
pub use criticality::{
    check_subcriticality, check_supercriticality, ConditionMargin, CriticalityReport,
};
pub use manufactured::{
    ExactSolution, ManufacturedKind, ManufacturedSolution, PeriodicExact, SubcriticalExact,
    SupercriticalExact,
};
