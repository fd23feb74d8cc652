use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bathymetry::Bathymetry;
use super::manufactured::{
    ManufacturedKind, ManufacturedSolution, PeriodicExact, SubcriticalExact, SupercriticalExact,
};
use crate::error::{Error, Result};
use crate::steady_state::{solve_steady_on, Branch};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Gravity used by the dimensional experiments.
pub const EARTH_GRAVITY: f64 = 9.812;

/// Which initial-boundary-value problem and which unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// `(eta, u)` with `u = 0` at both ends.
    DirichletVelocity,
    /// Deviations `(eta - eta0, u - u0)` vanishing at the inflow end.
    SupercriticalChar,
    /// Diagonal variables `(v, w)` with `v(left) = 0`, `w(right) = 0`.
    SubcriticalChar,
    /// Periodic `(d, q = d u)` in balance-law form.
    PeriodicBalanceLaw,
    /// Periodic `(eta, u)` in nonconservative form.
    PeriodicPrimitive,
}

impl Formulation {
    pub fn is_periodic(self) -> bool {
        matches!(self, Self::PeriodicBalanceLaw | Self::PeriodicPrimitive)
    }

    /// Names of the two stored unknowns.
    pub fn unknowns(self) -> [&'static str; 2] {
        match self {
            Self::DirichletVelocity | Self::SupercriticalChar | Self::PeriodicPrimitive => {
                ["eta", "u"]
            }
            Self::SubcriticalChar => ["v", "w"],
            Self::PeriodicBalanceLaw => ["d", "q"],
        }
    }
}

/// Reference constants. `h0` is the total height `H0` used by the
/// characteristic variables; when absent it is `beta(left) + eta0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(default)]
    pub eta0: f64,
    #[serde(default)]
    pub u0: f64,
    #[serde(default = "unit_gravity")]
    pub g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
}

fn unit_gravity() -> f64 {
    1.0
}

impl Default for Constants {
    fn default() -> Self {
        Self { eta0: 0.0, u0: 0.0, g: 1.0, h0: None }
    }
}

impl Constants {
    pub fn new(eta0: f64, u0: f64, g: f64) -> Self {
        Self { eta0, u0, g, h0: None }
    }
}

/// Initial free surface and velocity.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// `eta = eta0`, `u = u0`.
    Constant,
    /// `eta0 + eta_amp G(x)`, `u0 + u_amp G(x)` with
    /// `G = exp(-rate ((x - center) / scale)^2)`.
    Pulse {
        #[serde(default)]
        eta_amp: f64,
        #[serde(default)]
        u_amp: f64,
        rate: f64,
        center: f64,
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    /// Exact steady flow for the constants and bottom.
    Steady { branch: Branch },
    /// The manufactured solution at `t = 0`.
    Manufactured,
    #[serde(skip)]
    Custom { eta: ScalarFn, u: ScalarFn },
}

fn unit_scale() -> f64 {
    1.0
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant => write!(f, "Constant"),
            Self::Pulse { eta_amp, u_amp, rate, center, scale } => f
                .debug_struct("Pulse")
                .field("eta_amp", eta_amp)
                .field("u_amp", u_amp)
                .field("rate", rate)
                .field("center", center)
                .field("scale", scale)
                .finish(),
            Self::Steady { branch } => f.debug_struct("Steady").field("branch", branch).finish(),
            Self::Manufactured => write!(f, "Manufactured"),
            Self::Custom { .. } => write!(f, "Custom"),
        }
    }
}

/// Physical initial profiles.
#[derive(Clone)]
pub struct InitialProfile {
    pub eta: ScalarFn,
    pub u: ScalarFn,
}

fn unit_domain() -> [f64; 2] {
    [0.0, 1.0]
}

/// Everything physical about a run: equations, bottom, constants, data.
#[derive(Clone, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub formulation: Formulation,
    pub bathymetry: Bathymetry,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default = "unit_domain")]
    pub domain: [f64; 2],
    pub initial: InitialData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manufactured: Option<ManufacturedKind>,
}

impl fmt::Debug for ProblemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemConfig")
            .field("formulation", &self.formulation)
            .field("bathymetry", &self.bathymetry)
            .field("constants", &self.constants)
            .field("domain", &self.domain)
            .field("initial", &self.initial)
            .field("manufactured", &self.manufactured)
            .finish()
    }
}

const VALIDATION_SAMPLES: usize = 10_000;

impl ProblemConfig {
    pub fn new(
        formulation: Formulation,
        bathymetry: Bathymetry,
        constants: Constants,
        initial: InitialData,
    ) -> Self {
        Self {
            formulation,
            bathymetry,
            constants,
            domain: unit_domain(),
            initial,
            manufactured: None,
        }
    }

    pub fn with_domain(mut self, left: f64, right: f64) -> Self {
        self.domain = [left, right];
        self
    }

    pub fn with_manufactured(mut self, kind: ManufacturedKind) -> Self {
        self.manufactured = Some(kind);
        self.initial = InitialData::Manufactured;
        self
    }

    /// Supercritical manufactured test: Gaussian hump of
    /// amplitude 0.04, `eta0 = 1`, `u0 = 3`.
    pub fn manufactured_supercritical() -> Self {
        let bathy = Bathymetry::gaussian(1.0, 0.04, 100.0, 0.5).expect("valid bottom");
        Self::new(
            Formulation::SupercriticalChar,
            bathy,
            Constants::new(1.0, 3.0, 1.0),
            InitialData::Manufactured,
        )
        .with_manufactured(ManufacturedKind::Supercritical(SupercriticalExact { eta0: 1.0, u0: 3.0 }))
    }

    /// Subcritical manufactured test with `eta0 = u0 = 1`, `H0 = 2`.
    pub fn manufactured_subcritical() -> Self {
        let bathy = Bathymetry::gaussian(1.0, 0.04, 100.0, 0.5).expect("valid bottom");
        let mut c = Constants::new(1.0, 1.0, 1.0);
        c.h0 = Some(2.0);
        Self::new(Formulation::SubcriticalChar, bathy, c, InitialData::Manufactured)
            .with_manufactured(ManufacturedKind::Subcritical(SubcriticalExact { eta0: 1.0, u0: 1.0 }))
    }

    /// Smooth periodic travelling-wave test over a sinusoidal bottom.
    pub fn manufactured_periodic(formulation: Formulation) -> Self {
        let bathy = Bathymetry::sinusoid(1.0, 0.1, 1.0).expect("valid bottom");
        let exact = PeriodicExact {
            eta_amp: 0.1,
            eta_speed: 0.5,
            u_mean: 0.2,
            u_amp: 0.1,
            u_speed: 0.3,
        };
        Self::new(formulation, bathy, Constants::default(), InitialData::Manufactured)
            .with_manufactured(ManufacturedKind::Periodic(exact))
    }

    pub fn left(&self) -> f64 {
        self.domain[0]
    }

    pub fn right(&self) -> f64 {
        self.domain[1]
    }

    pub fn g(&self) -> f64 {
        self.constants.g
    }

    /// Total reference height `H0`.
    pub fn h0_total(&self) -> f64 {
        self.constants
            .h0
            .unwrap_or_else(|| self.bathymetry.beta(self.left()) + self.constants.eta0)
    }

    /// `delta0 = sqrt(H0)`.
    pub fn delta0(&self) -> f64 {
        self.h0_total().sqrt()
    }

    /// Reference wave speed `c0 = sqrt(g H0)`.
    pub fn c0(&self) -> f64 {
        (self.g() * self.h0_total()).sqrt()
    }

    /// `Fr = u0 / sqrt(g h)` for a typical depth `h`.
    pub fn froude(&self, depth: f64) -> f64 {
        self.constants.u0 / (self.g() * depth).sqrt()
    }

    pub fn manufactured_solution(&self) -> Option<ManufacturedSolution> {
        self.manufactured
            .map(|k| ManufacturedSolution::new(k.exact(), self.bathymetry.clone(), self.g()))
    }

    /// Checks the constants against the formulation's regime and the bottom
    /// against positivity.
    pub fn validate(&self) -> Result<()> {
        let [left, right] = self.domain;
        if !(left.is_finite() && right.is_finite() && left < right) {
            return Err(Error::Config(format!("bad domain [{left}, {right}]")));
        }
        let c = &self.constants;
        if !(c.g > 0.0 && c.g.is_finite()) || !c.eta0.is_finite() || !c.u0.is_finite() {
            return Err(Error::Config(format!("bad constants {c:?}")));
        }
        self.bathymetry
            .validate(left, right, VALIDATION_SAMPLES)
            .map_err(|e| Error::Config(e.to_string()))?;
        let g = c.g;
        match self.formulation {
            Formulation::SupercriticalChar => {
                for i in 0..=VALIDATION_SAMPLES {
                    let x = left + (right - left) * i as f64 / VALIDATION_SAMPLES as f64;
                    let depth = self.bathymetry.beta(x) + c.eta0;
                    if !(depth > 0.0 && c.u0 > (g * depth).sqrt()) {
                        return Err(Error::Config(format!(
                            "u0 = {} is not supercritical at x = {x} (depth {depth})",
                            c.u0
                        )));
                    }
                }
            }
            Formulation::SubcriticalChar => {
                let h0 = self.h0_total();
                if !(h0 > 0.0 && c.u0 * c.u0 < g * h0) {
                    return Err(Error::Config(format!(
                        "u0 = {} is not subcritical for H0 = {h0}",
                        c.u0
                    )));
                }
            }
            Formulation::PeriodicBalanceLaw | Formulation::PeriodicPrimitive => {
                let (bl, br) = (self.bathymetry.beta(left), self.bathymetry.beta(right));
                if (bl - br).abs() > 1e-8 * bl.abs().max(br.abs()) {
                    return Err(Error::Config(format!(
                        "bottom is not periodic: beta(left) = {bl}, beta(right) = {br}"
                    )));
                }
            }
            Formulation::DirichletVelocity => {}
        }
        if matches!(self.initial, InitialData::Manufactured) && self.manufactured.is_none() {
            return Err(Error::Config(
                "manufactured initial data requires a manufactured solution".into(),
            ));
        }
        Ok(())
    }

    /// Physical initial `eta(x)` and `u(x)`.
    pub fn initial_profile(&self) -> Result<InitialProfile> {
        let c = self.constants;
        let (eta, u): (ScalarFn, ScalarFn) = match &self.initial {
            InitialData::Constant => (Arc::new(move |_| c.eta0), Arc::new(move |_| c.u0)),
            &InitialData::Pulse { eta_amp, u_amp, rate, center, scale } => {
                let bump = move |x: f64| {
                    let z = (x - center) / scale;
                    (-rate * z * z).exp()
                };
                (
                    Arc::new(move |x| c.eta0 + eta_amp * bump(x)),
                    Arc::new(move |x| c.u0 + u_amp * bump(x)),
                )
            }
            InitialData::Steady { branch } => {
                let p = Arc::new(solve_steady_on(
                    &self.bathymetry,
                    c.eta0,
                    c.u0,
                    c.g,
                    self.left(),
                    Some(self.right()),
                    *branch,
                )?);
                let q = p.clone();
                (Arc::new(move |x| p.eta(x)), Arc::new(move |x| q.u(x)))
            }
            InitialData::Manufactured => {
                let m = self.manufactured_solution().ok_or_else(|| {
                    Error::Config("manufactured initial data without a solution".into())
                })?;
                let m2 = m.clone();
                (Arc::new(move |x| m.eta(x, 0.0)), Arc::new(move |x| m2.u(x, 0.0)))
            }
            InitialData::Custom { eta, u } => (eta.clone(), u.clone()),
        };
        Ok(InitialProfile { eta, u })
    }
}
