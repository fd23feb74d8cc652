use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{ConvergenceSpec, FroudeSweepSpec, TemporalSpec, WellBalanceSpec};
use crate::error::{Error, Result};
use crate::problems::{Bathymetry, Formulation, ProblemConfig};
use crate::semidiscrete::{Discretization, MeshSpec};
use crate::steady_state::Branch;
use crate::time_integration::{DtRule, SteadyMonitor, TableauSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    Spatial(ConvergenceSpec),
    Temporal(TemporalSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    pub problem: ProblemConfig,
    pub study: Study,
}

/// One time-dependent run with recorded snapshots.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub problem: ProblemConfig,
    pub mesh: MeshSpec,
    #[serde(default)]
    pub discretization: Discretization,
    pub dt: DtRule,
    pub t_end: f64,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    #[serde(default)]
    pub tableau: TableauSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<SteadyMonitor>,
    /// Output points per element in profile files.
    #[serde(default = "two")]
    pub samples_per_element: usize,
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulateConfig {
    Run(RunSpec),
    FroudeSweep(FroudeSweepSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellBalanceConfig {
    pub problem: ProblemConfig,
    pub study: WellBalanceSpec,
}

/// Steady-flow preservation run: the exact profile with inflow state
/// `(eta0, u0)` is projected, integrated to `t_end` and compared.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyConfig {
    pub bathymetry: Bathymetry,
    pub eta0: f64,
    pub u0: f64,
    #[serde(default = "unit_gravity")]
    pub g: f64,
    #[serde(default = "unit_domain")]
    pub domain: [f64; 2],
    pub branch: Branch,
    pub n: usize,
    #[serde(default = "two")]
    pub order: usize,
    #[serde(default = "tenth")]
    pub ratio: f64,
    pub t_end: f64,
}

impl SteadyConfig {
    pub fn formulation(&self) -> Formulation {
        match self.branch {
            Branch::Supercritical => Formulation::SupercriticalChar,
            Branch::Subcritical => Formulation::SubcriticalChar,
        }
    }
}

fn unit_gravity() -> f64 {
    1.0
}

fn unit_domain() -> [f64; 2] {
    [0.0, 1.0]
}

fn tenth() -> f64 {
    0.1
}

/// Reads a config of type `T`. A run manifest is accepted as well, in
/// which case the resolved config stored in it is used.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Error::Config(format!("{}: {e}", path.display()));
    match value {
        serde_json::Value::Object(mut m) if m.get("tool").and_then(|t| t.as_str()) == Some("swfem") => {
            let cfg = m
                .remove("config")
                .ok_or_else(|| Error::Config(format!("{}: manifest without config", path.display())))?;
            serde_json::from_value(cfg).map_err(bad)
        }
        // reparse from text so schema errors keep their line and column
        _ => serde_json::from_str(&text).map_err(bad),
    }
}
