use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::problems::Bathymetry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Supercritical,
    Subcritical,
}

/// Smooth steady flow over a bottom, fixed by the inflow state at `left`.
///
/// Along the flow the discharge `Q = d u` and the head `g eta + u^2/2` are
/// constant, so the depth `d = beta + eta` solves
/// `g d^3 - (g beta + E) d^2 + Q^2/2 = 0` with `E` the head.
#[derive(Debug, Clone)]
pub struct SteadyProfile {
    bathymetry: Bathymetry,
    branch: Branch,
    eta0: f64,
    u0: f64,
    g: f64,
    discharge: f64,
    head: f64,
    domain: [f64; 2],
}

const DOMAIN_SAMPLES: usize = 4000;

/// Steady profile with `eta(left) = eta0`, `u(left) = u0`. Fails if the
/// inflow is on the wrong side of critical or if the bottom anywhere in
/// `[left, right]` forces a transition through critical flow.
pub fn solve_steady(
    bathymetry: &Bathymetry,
    eta0: f64,
    u0: f64,
    g: f64,
    left: f64,
    branch: Branch,
) -> Result<SteadyProfile> {
    solve_steady_on(bathymetry, eta0, u0, g, left, None, branch)
}

/// As [`solve_steady`], additionally checking admissibility on `[left, right]`.
pub fn solve_steady_on(
    bathymetry: &Bathymetry,
    eta0: f64,
    u0: f64,
    g: f64,
    left: f64,
    right: Option<f64>,
    branch: Branch,
) -> Result<SteadyProfile> {
    if !(g > 0.0) || !eta0.is_finite() || !u0.is_finite() {
        return invalid(format!("bad steady data eta0 = {eta0}, u0 = {u0}, g = {g}"));
    }
    let d_left = bathymetry.beta(left) + eta0;
    if !(d_left > 0.0) {
        return invalid(format!("inflow depth {d_left} is not positive"));
    }
    let froude2 = u0 * u0 / (g * d_left);
    let ok = match branch {
        Branch::Supercritical => froude2 > 1.0,
        Branch::Subcritical => froude2 < 1.0,
    };
    if !ok {
        return invalid(format!(
            "inflow Froude number {} does not match the {branch:?} branch",
            froude2.sqrt()
        ));
    }
    let right = right.unwrap_or_else(|| match bathymetry {
        Bathymetry::Trapezoid { length, .. } | Bathymetry::CosineHump { length, .. } => *length,
        _ => left + 1.0,
    });
    if !(right > left) {
        return invalid(format!("empty interval [{left}, {right}]"));
    }
    let p = SteadyProfile {
        bathymetry: bathymetry.clone(),
        branch,
        eta0,
        u0,
        g,
        discharge: d_left * u0,
        head: g * eta0 + 0.5 * u0 * u0,
        domain: [left, right],
    };
    for i in 0..=DOMAIN_SAMPLES {
        let x = left + (right - left) * i as f64 / DOMAIN_SAMPLES as f64;
        p.check_admissible(x)?;
    }
    for k in bathymetry.kinks() {
        if k >= left && k <= right {
            p.check_admissible(k)?;
        }
    }
    Ok(p)
}

impl SteadyProfile {
    /// Interval on which the profile was checked.
    pub fn domain(&self) -> [f64; 2] {
        self.domain
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn bathymetry(&self) -> &Bathymetry {
        &self.bathymetry
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `Q = (beta(left) + eta0) u0`.
    pub fn discharge(&self) -> f64 {
        self.discharge
    }

    /// `E = g eta0 + u0^2 / 2`.
    pub fn head(&self) -> f64 {
        self.head
    }

    /// Smallest `beta` for which both branches exist.
    pub fn critical_beta(&self) -> f64 {
        let s = (27.0 * self.g * self.g * self.discharge * self.discharge / 8.0).cbrt();
        (s - self.head) / self.g
    }

    fn check_admissible(&self, x: f64) -> Result<()> {
        let beta = self.bathymetry.beta(x);
        let bc = self.critical_beta();
        if !(beta > bc) && self.discharge != 0.0 {
            return Err(Error::NoSteadyState { x, beta, beta_critical: bc });
        }
        Ok(())
    }

    /// Cubic residual `g d^3 - (g beta + E) d^2 + Q^2/2` at depth `d`.
    pub fn cubic(&self, beta: f64, d: f64) -> f64 {
        let a = self.g * beta + self.head;
        (self.g * d - a) * d * d + 0.5 * self.discharge * self.discharge
    }

    /// Depth `beta + eta` at `x`.
    pub fn depth(&self, x: f64) -> f64 {
        let beta = self.bathymetry.beta(x);
        let g = self.g;
        let a = g * beta + self.head;
        let q2 = 0.5 * self.discharge * self.discharge;
        let d_star = 2.0 * a / (3.0 * g);
        if q2 == 0.0 {
            return match self.branch {
                Branch::Subcritical => a / g,
                Branch::Supercritical => 0.0,
            };
        }
        // f(0) > 0, f(d*) < 0, f(a/g) > 0: each branch owns one bracket.
        let (mut lo, mut hi) = match self.branch {
            Branch::Supercritical => (0.0, d_star),
            Branch::Subcritical => (d_star, a / g),
        };
        let f = |d: f64| (g * d - a) * d * d + q2;
        let df = |d: f64| (3.0 * g * d - 2.0 * a) * d;
        let f_lo_positive = f(lo) > 0.0;
        let mut d = match self.branch {
            Branch::Supercritical => 0.5 * (lo + hi),
            Branch::Subcritical => a / g,
        };
        // safeguarded Newton, run until the update is at rounding level
        for _ in 0..200 {
            let fd = f(d);
            if fd == 0.0 {
                return d;
            }
            if (fd > 0.0) == f_lo_positive {
                lo = d;
            } else {
                hi = d;
            }
            let step = d - fd / df(d);
            let next = if step > lo && step < hi && step.is_finite() { step } else { 0.5 * (lo + hi) };
            if (next - d).abs() <= 2.0 * f64::EPSILON * d || hi - lo <= 4.0 * f64::EPSILON * hi {
                return next;
            }
            d = next;
        }
        d
    }

    pub fn eta(&self, x: f64) -> f64 {
        self.depth(x) - self.bathymetry.beta(x)
    }

    pub fn u(&self, x: f64) -> f64 {
        self.discharge / self.depth(x)
    }
}
