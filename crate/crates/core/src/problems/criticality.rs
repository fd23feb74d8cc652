//! Pointwise checks of the flow-regime conditions that the characteristic
//! boundary treatment relies on.

use serde::Serialize;

use super::config::ProblemConfig;

/// Worst margin of one inequality over the sample grid; `margin >= 0` means
/// the inequality holds there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionMargin {
    pub name: &'static str,
    pub margin: f64,
    pub at_x: f64,
}

impl ConditionMargin {
    pub fn holds(&self) -> bool {
        self.margin >= 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalityReport {
    pub conditions: Vec<ConditionMargin>,
}

impl CriticalityReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(ConditionMargin::holds)
    }

    pub fn first_failure(&self) -> Option<&ConditionMargin> {
        self.conditions.iter().find(|c| !c.holds())
    }
}

fn sample_grid(cfg: &ProblemConfig, samples: usize) -> impl Iterator<Item = f64> + '_ {
    let n = samples.max(1);
    let [l, r] = cfg.domain;
    (0..=n).map(move |i| l + (r - l) * i as f64 / n as f64)
}

fn worst(
    name: &'static str,
    xs: impl Iterator<Item = f64>,
    margin: impl Fn(f64) -> f64,
) -> ConditionMargin {
    let mut out = ConditionMargin { name, margin: f64::INFINITY, at_x: f64::NAN };
    for x in xs {
        let m = margin(x);
        if m < out.margin || m.is_nan() {
            out = ConditionMargin { name, margin: m, at_x: x };
            if m.is_nan() {
                break;
            }
        }
    }
    out
}

/// Samples `beta + eta >= b`, `u >= 2a` and `g (beta + eta) <= (u - a)(u - 2a/3)`
/// for physical `eta(x)`, `u(x)`.
pub fn check_supercriticality(
    eta: impl Fn(f64) -> f64,
    u: impl Fn(f64) -> f64,
    cfg: &ProblemConfig,
    a: f64,
    b: f64,
    samples: usize,
) -> CriticalityReport {
    let g = cfg.g();
    let depth = |x: f64| cfg.bathymetry.beta(x) + eta(x);
    let conditions = vec![
        worst("depth >= b", sample_grid(cfg, samples), |x| depth(x) - b),
        worst("u >= 2a", sample_grid(cfg, samples), |x| u(x) - 2.0 * a),
        worst("g depth <= (u - a)(u - 2a/3)", sample_grid(cfg, samples), |x| {
            let v = u(x);
            (v - a) * (v - 2.0 * a / 3.0) - g * depth(x)
        }),
    ];
    CriticalityReport { conditions }
}

/// Largest `c0` with `u + sqrt(g H) >= c0` and `u - sqrt(g H) <= -c0`
/// everywhere on the sample grid, reported as the margin of both
/// characteristic speeds.
pub fn check_subcriticality(
    eta: impl Fn(f64) -> f64,
    u: impl Fn(f64) -> f64,
    cfg: &ProblemConfig,
    samples: usize,
) -> CriticalityReport {
    let g = cfg.g();
    let speed = |x: f64| (g * (cfg.bathymetry.beta(x) + eta(x))).sqrt();
    let conditions = vec![
        worst("u + c >= c0", sample_grid(cfg, samples), |x| u(x) + speed(x)),
        worst("u - c <= -c0", sample_grid(cfg, samples), |x| speed(x) - u(x)),
    ];
    CriticalityReport { conditions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Bathymetry, Constants, Formulation, InitialData};

    fn cfg(formulation: Formulation, eta0: f64, u0: f64) -> ProblemConfig {
        ProblemConfig::new(
            formulation,
            Bathymetry::flat(1.0).unwrap(),
            Constants::new(eta0, u0, 1.0),
            InitialData::Constant,
        )
    }

    #[test]
    fn constant_supercritical_state_passes() {
        let c = cfg(Formulation::SupercriticalChar, 1.0, 3.0);
        let r = check_supercriticality(|_| 1.0, |_| 3.0, &c, 0.5, 1.0, 100);
        assert!(r.passed(), "{r:?}");
        // 2.5 * 2.666.. - 2
        assert!((r.conditions[2].margin - (2.5 * (3.0 - 1.0 / 3.0) - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn slow_spot_is_located() {
        let c = cfg(Formulation::SupercriticalChar, 1.0, 3.0);
        let r = check_supercriticality(|_| 1.0, |x| if x > 0.7 { 0.5 } else { 3.0 }, &c, 0.5, 1.0, 100);
        let f = r.first_failure().unwrap();
        assert_eq!(f.name, "u >= 2a");
        assert!(f.at_x > 0.7);
    }

    #[test]
    fn subcritical_margin() {
        let c = cfg(Formulation::SubcriticalChar, 1.0, 1.0);
        let r = check_subcriticality(|_| 1.0, |_| 1.0, &c, 50);
        assert!(r.passed());
        let s2 = 2f64.sqrt();
        assert!((r.conditions[0].margin - (1.0 + s2)).abs() < 1e-12);
        assert!((r.conditions[1].margin - (s2 - 1.0)).abs() < 1e-12);
    }
}
