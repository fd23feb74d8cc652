//! Closed-form solutions with their partial derivatives, and the forcing
//! terms that make them exact solutions of the forced system
//!
//! ```text
//! eta_t + ((beta + eta) u)_x = F_eta
//! u_t + g eta_x + u u_x      = F_u
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bathymetry::Bathymetry;

/// A smooth closed-form `(eta, u)` with analytic first partials.
pub trait ExactSolution: Send + Sync {
    fn eta(&self, x: f64, t: f64) -> f64;
    fn u(&self, x: f64, t: f64) -> f64;
    fn eta_t(&self, x: f64, t: f64) -> f64;
    fn eta_x(&self, x: f64, t: f64) -> f64;
    fn u_t(&self, x: f64, t: f64) -> f64;
    fn u_x(&self, x: f64, t: f64) -> f64;
}

/// `eta = x e^{-xt} + eta0`, `u = (1 - x - cos(pi x)) e^{2t} + u0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupercriticalExact {
    pub eta0: f64,
    pub u0: f64,
}

impl ExactSolution for SupercriticalExact {
    fn eta(&self, x: f64, t: f64) -> f64 {
        x * (-x * t).exp() + self.eta0
    }
    fn u(&self, x: f64, t: f64) -> f64 {
        (1.0 - x - (PI * x).cos()) * (2.0 * t).exp() + self.u0
    }
    fn eta_t(&self, x: f64, t: f64) -> f64 {
        -x * x * (-x * t).exp()
    }
    fn eta_x(&self, x: f64, t: f64) -> f64 {
        (1.0 - x * t) * (-x * t).exp()
    }
    fn u_t(&self, x: f64, t: f64) -> f64 {
        2.0 * (1.0 - x - (PI * x).cos()) * (2.0 * t).exp()
    }
    fn u_x(&self, x: f64, t: f64) -> f64 {
        (PI * (PI * x).sin() - 1.0) * (2.0 * t).exp()
    }
}

/// `eta = (x + 1) e^{-xt}`,
/// `u = (2x + cos(pi x) - 1) e^t + x A(t) + (1 - x) B(t)` with
/// `A = 2 sqrt(1 + eta(1,t)) + u0 - 2 sqrt(1 + eta0)` and
/// `B = -2 sqrt(1 + eta(0,t)) + u0 + 2 sqrt(1 + eta0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubcriticalExact {
    pub eta0: f64,
    pub u0: f64,
}

impl SubcriticalExact {
    pub fn a(&self, t: f64) -> f64 {
        2.0 * (1.0 + self.eta(1.0, t)).sqrt() + self.u0 - 2.0 * (1.0 + self.eta0).sqrt()
    }
    pub fn b(&self, t: f64) -> f64 {
        -2.0 * (1.0 + self.eta(0.0, t)).sqrt() + self.u0 + 2.0 * (1.0 + self.eta0).sqrt()
    }
    fn da(&self, t: f64) -> f64 {
        self.eta_t(1.0, t) / (1.0 + self.eta(1.0, t)).sqrt()
    }
    fn db(&self, t: f64) -> f64 {
        -self.eta_t(0.0, t) / (1.0 + self.eta(0.0, t)).sqrt()
    }
}

impl ExactSolution for SubcriticalExact {
    fn eta(&self, x: f64, t: f64) -> f64 {
        (x + 1.0) * (-x * t).exp()
    }
    fn u(&self, x: f64, t: f64) -> f64 {
        (2.0 * x + (PI * x).cos() - 1.0) * t.exp() + x * self.a(t) + (1.0 - x) * self.b(t)
    }
    fn eta_t(&self, x: f64, t: f64) -> f64 {
        -x * (x + 1.0) * (-x * t).exp()
    }
    fn eta_x(&self, x: f64, t: f64) -> f64 {
        (1.0 - (x + 1.0) * t) * (-x * t).exp()
    }
    fn u_t(&self, x: f64, t: f64) -> f64 {
        (2.0 * x + (PI * x).cos() - 1.0) * t.exp() + x * self.da(t) + (1.0 - x) * self.db(t)
    }
    fn u_x(&self, x: f64, t: f64) -> f64 {
        (2.0 - PI * (PI * x).sin()) * t.exp() + self.a(t) - self.b(t)
    }
}

/// Travelling waves on a unit-periodic domain:
/// `eta = eta_amp sin(2 pi (x - eta_speed t))`,
/// `u = u_mean + u_amp cos(2 pi (x + u_speed t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicExact {
    pub eta_amp: f64,
    pub eta_speed: f64,
    pub u_mean: f64,
    pub u_amp: f64,
    pub u_speed: f64,
}

impl ExactSolution for PeriodicExact {
    fn eta(&self, x: f64, t: f64) -> f64 {
        self.eta_amp * (2.0 * PI * (x - self.eta_speed * t)).sin()
    }
    fn u(&self, x: f64, t: f64) -> f64 {
        self.u_mean + self.u_amp * (2.0 * PI * (x + self.u_speed * t)).cos()
    }
    fn eta_t(&self, x: f64, t: f64) -> f64 {
        -2.0 * PI * self.eta_speed * self.eta_amp * (2.0 * PI * (x - self.eta_speed * t)).cos()
    }
    fn eta_x(&self, x: f64, t: f64) -> f64 {
        2.0 * PI * self.eta_amp * (2.0 * PI * (x - self.eta_speed * t)).cos()
    }
    fn u_t(&self, x: f64, t: f64) -> f64 {
        -2.0 * PI * self.u_speed * self.u_amp * (2.0 * PI * (x + self.u_speed * t)).sin()
    }
    fn u_x(&self, x: f64, t: f64) -> f64 {
        -2.0 * PI * self.u_amp * (2.0 * PI * (x + self.u_speed * t)).sin()
    }
}

/// Which closed form to use; the serializable face of [`ManufacturedSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManufacturedKind {
    Supercritical(SupercriticalExact),
    Subcritical(SubcriticalExact),
    Periodic(PeriodicExact),
}

impl ManufacturedKind {
    pub fn exact(&self) -> Arc<dyn ExactSolution> {
        match *self {
            Self::Supercritical(s) => Arc::new(s),
            Self::Subcritical(s) => Arc::new(s),
            Self::Periodic(s) => Arc::new(s),
        }
    }
}

/// A closed-form solution together with the bottom and gravity that define
/// its forcing terms.
#[derive(Clone)]
pub struct ManufacturedSolution {
    exact: Arc<dyn ExactSolution>,
    bathymetry: Bathymetry,
    g: f64,
}

impl fmt::Debug for ManufacturedSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ManufacturedSolution")
            .field("bathymetry", &self.bathymetry)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

impl ManufacturedSolution {
    pub fn new(exact: Arc<dyn ExactSolution>, bathymetry: Bathymetry, g: f64) -> Self {
        Self { exact, bathymetry, g }
    }

    pub fn exact(&self) -> &dyn ExactSolution {
        &*self.exact
    }

    pub fn eta(&self, x: f64, t: f64) -> f64 {
        self.exact.eta(x, t)
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.exact.u(x, t)
    }

    pub fn depth(&self, x: f64, t: f64) -> f64 {
        self.bathymetry.beta(x) + self.exact.eta(x, t)
    }

    /// `F_eta = eta_t + ((beta + eta) u)_x`.
    pub fn forcing_eta(&self, x: f64, t: f64) -> f64 {
        let e = &*self.exact;
        let d = self.bathymetry.beta(x) + e.eta(x, t);
        let dx = self.bathymetry.dbeta(x) + e.eta_x(x, t);
        e.eta_t(x, t) + dx * e.u(x, t) + d * e.u_x(x, t)
    }

    /// `F_u = u_t + g eta_x + u u_x`.
    pub fn forcing_u(&self, x: f64, t: f64) -> f64 {
        let e = &*self.exact;
        e.u_t(x, t) + self.g * e.eta_x(x, t) + e.u(x, t) * e.u_x(x, t)
    }

    /// Forcing of the momentum balance `(du)_t + (du^2 + g d^2/2)_x = g beta' d`,
    /// which equals `u F_eta + d F_u`.
    pub fn forcing_discharge(&self, x: f64, t: f64) -> f64 {
        self.u(x, t) * self.forcing_eta(x, t) + self.depth(x, t) * self.forcing_u(x, t)
    }

    /// Forcings of the characteristic variables
    /// `v = (u + 2 sqrt(gH))/2 + const`, `w = (u - 2 sqrt(gH))/2 + const`:
    /// `F_v = F_u/2 + g F_eta / (2c)` and `F_w = F_u/2 - g F_eta / (2c)`,
    /// `c = sqrt(g H)` evaluated on the closed form.
    pub fn forcing_characteristic(&self, x: f64, t: f64) -> (f64, f64) {
        let fe = self.forcing_eta(x, t);
        let fu = self.forcing_u(x, t);
        let c = (self.g * self.depth(x, t)).sqrt();
        let k = self.g * fe / (2.0 * c);
        (0.5 * fu + k, 0.5 * fu - k)
    }
}
