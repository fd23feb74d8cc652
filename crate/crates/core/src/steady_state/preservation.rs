use serde::Serialize;

use crate::assembly::{gauss_rule, l2_norm_fn};
use crate::error::{Error, Result};
use crate::problems::{Constants, Formulation, InitialData, ProblemConfig};
use crate::semidiscrete::{Discretization, MeshSpec, Scheme};
use crate::time_integration::{run, ButcherTableau, RunOptions};

use super::{Branch, SteadyProfile};

#[derive(Debug, Clone, Serialize)]
pub struct PreservationReport {
    pub n: usize,
    pub order: usize,
    pub dt: f64,
    pub t_end: f64,
    pub steps: usize,
    /// L2 norms of `eta_h(T) - eta_h(0)` and `u_h(T) - u_h(0)`.
    pub drift: [f64; 2],
}

/// Problem whose initial data is the given steady profile.
pub fn steady_config(profile: &SteadyProfile, formulation: Formulation) -> Result<ProblemConfig> {
    let fits = matches!(
        (profile.branch(), formulation),
        (Branch::Supercritical, Formulation::SupercriticalChar)
            | (Branch::Subcritical, Formulation::SubcriticalChar)
    );
    if !fits {
        return Err(Error::Config(format!(
            "{:?} profile cannot be run with {formulation:?}",
            profile.branch()
        )));
    }
    let [left, right] = profile.domain();
    Ok(ProblemConfig::new(
        formulation,
        profile.bathymetry().clone(),
        Constants::new(profile.eta0(), profile.u0(), profile.g()),
        InitialData::Steady { branch: profile.branch() },
    )
    .with_domain(left, right))
}

/// Starts from the projected profile on `n` uniform elements, integrates
/// with RK4 and `dt = ratio * h` up to `t_end` and measures how far the
/// discrete solution moved.
pub fn steady_preservation_test(
    profile: &SteadyProfile,
    formulation: Formulation,
    n: usize,
    order: usize,
    ratio: f64,
    t_end: f64,
) -> Result<PreservationReport> {
    let cfg = steady_config(profile, formulation)?;
    let mesh = MeshSpec::uniform(n).build(&cfg)?;
    let scheme = Scheme::new(&cfg, mesh.clone(), &Discretization::with_order(order))?;
    let s0 = scheme.initial_state()?;
    let dt = ratio * mesh.h_max();
    let opts = RunOptions { t0: 0.0, t_end, dt, snapshots: vec![], steady: None };
    let out = run(&scheme, &ButcherTableau::rk4(), s0.coeffs(), &opts, &mut |_| {})?;
    let s1 = scheme.state_from_coeffs(out.t, &out.y)?;
    let rule = gauss_rule(order + 3)?;
    let de = l2_norm_fn(&mesh, |x| scheme.eta(&s1, x) - scheme.eta(&s0, x), &rule);
    let du = l2_norm_fn(&mesh, |x| scheme.u(&s1, x) - scheme.u(&s0, x), &rule);
    Ok(PreservationReport { n, order, dt, t_end, steps: out.steps, drift: [de, du] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Bathymetry;
    use crate::steady_state::solve_steady;

    #[test]
    fn flat_bottom_is_exact() {
        let b = Bathymetry::flat(1.0).unwrap();
        for (u0, br, f) in [
            (3.0, Branch::Supercritical, Formulation::SupercriticalChar),
            (0.5, Branch::Subcritical, Formulation::SubcriticalChar),
        ] {
            let p = solve_steady(&b, 0.0, u0, 1.0, 0.0, br).unwrap();
            let r = steady_preservation_test(&p, f, 40, 2, 0.1, 0.2).unwrap();
            assert!(r.drift[0] <= 1e-12 && r.drift[1] <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn branch_mismatch_is_rejected() {
        let b = Bathymetry::flat(1.0).unwrap();
        let p = solve_steady(&b, 0.0, 3.0, 1.0, 0.0, Branch::Supercritical).unwrap();
        assert!(steady_preservation_test(&p, Formulation::SubcriticalChar, 10, 2, 0.1, 0.1).is_err());
    }

    #[test]
    fn hump_drift_is_small() {
        let b = Bathymetry::gaussian(1.0, 0.4, 100.0, 0.5).unwrap();
        let p = solve_steady(&b, 1.0, 3.0, 1.0, 0.0, Branch::Supercritical).unwrap();
        let r = steady_preservation_test(&p, Formulation::SupercriticalChar, 100, 2, 0.1, 0.2).unwrap();
        assert!(r.drift[0] < 5e-6 && r.drift[1] < 5e-6, "{r:?}");
    }
}
