use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh_space::Mesh;
use crate::problems::ProblemConfig;

/// Where the bottom in the discrete equations comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    /// The closed-form `beta` and `beta'`.
    #[default]
    AnalyticBeta,
    /// `beta_h = P beta` in the unconstrained space and its exact derivative.
    ProjectedBeta,
    /// The interpolant of `beta` at the Greville points.
    InterpolatedBeta,
}

/// How the momentum flux of the balance-law form enters the weak form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxForm {
    /// `-(F, phi')`: the flux is integrated by parts (no boundary terms on a
    /// periodic domain).
    #[default]
    Weak,
    /// `(F_x, phi)` with `F_x` expanded by the product rule at the
    /// quadrature points.
    Strong,
}

pub const DEFAULT_DEPTH_FLOOR: f64 = 1e-10;

/// Spatial discretisation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    /// Polynomial order `r` (degree `r - 1`).
    #[serde(default = "default_order")]
    pub order: usize,
    /// Continuity class; `r - 2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<usize>,
    /// Gauss points per element; `r + 1` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<usize>,
    #[serde(default)]
    pub source: SourceMode,
    #[serde(default)]
    pub flux: FluxForm,
    #[serde(default = "default_floor")]
    pub depth_floor: f64,
}

fn default_order() -> usize {
    2
}

fn default_floor() -> f64 {
    DEFAULT_DEPTH_FLOOR
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            order: 2,
            continuity: None,
            quadrature: None,
            source: SourceMode::default(),
            flux: FluxForm::default(),
            depth_floor: DEFAULT_DEPTH_FLOOR,
        }
    }
}

impl Discretization {
    pub fn with_order(order: usize) -> Self {
        Self { order, ..Self::default() }
    }

    pub fn continuity(&self) -> usize {
        self.continuity.unwrap_or(self.order.saturating_sub(2))
    }

    pub fn quadrature_points(&self) -> usize {
        self.quadrature.unwrap_or(self.order + 1)
    }
}

/// Mesh description used by configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    /// Number of elements.
    pub n: usize,
    /// Node jitter as a fraction of the uniform spacing; 0 for uniform.
    #[serde(default)]
    pub perturbation: f64,
    #[serde(default)]
    pub seed: u64,
    /// Move nodes within `1e-12 L` of a bottom kink onto it.
    #[serde(default = "yes")]
    pub snap_to_kinks: bool,
}

fn yes() -> bool {
    true
}

impl MeshSpec {
    pub fn uniform(n: usize) -> Self {
        Self { n, perturbation: 0.0, seed: 0, snap_to_kinks: true }
    }

    pub fn build(&self, cfg: &ProblemConfig) -> Result<Arc<Mesh>> {
        let [l, r] = cfg.domain;
        let mesh = if self.perturbation == 0.0 {
            Mesh::uniform(self.n, l, r)
        } else {
            Mesh::perturbed(self.n, l, r, self.perturbation, self.seed)
        }
        .map_err(|e| Error::Config(e.to_string()))?;
        let kinks = cfg.bathymetry.kinks();
        if self.snap_to_kinks && !kinks.is_empty() {
            return Ok(Arc::new(mesh.snapped_to(&kinks, 1e-12 * (r - l))?));
        }
        Ok(Arc::new(mesh))
    }
}
