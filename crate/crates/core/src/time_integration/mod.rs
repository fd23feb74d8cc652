//! Explicit Runge–Kutta time stepping.

mod stepper;
mod tableau;

pub use stepper::{
    rk_step, run, DtRule, Event, OdeRhs, RunOptions, RunOutput, SteadyMonitor, Workspace,
};
pub use tableau::{ButcherTableau, TableauSpec};
