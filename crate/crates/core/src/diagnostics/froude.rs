use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{Bathymetry, Constants, Formulation, InitialData, ProblemConfig, EARTH_GRAVITY};
use crate::semidiscrete::{Discretization, MeshSpec, Scheme};
use crate::steady_state::{solve_steady_on, Branch};
use crate::time_integration::{run, RunOptions, SteadyMonitor, TableauSpec};

use super::map_rows;
use super::output::sample_points;

/// Trapezoidal bottom without the ramp factor `c`, which the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidSpec {
    pub length: f64,
    pub delta0: f64,
    pub kappa: f64,
    pub h0: f64,
}

/// Supercritical flow from `eta = 0`, `u = Fr sqrt(g h0)` over a trapezoid,
/// for every `(c, Fr)` pair and every resolution in `ns`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FroudeSweepSpec {
    pub trapezoid: TrapezoidSpec,
    #[serde(default = "gravity")]
    pub g: f64,
    pub froude: Vec<f64>,
    pub c: Vec<f64>,
    pub ns: Vec<usize>,
    #[serde(default = "order_two")]
    pub order: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Stops a run early once it is steady in this sense.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<SteadyMonitor>,
    #[serde(default)]
    pub tableau: TableauSpec,
}

fn gravity() -> f64 {
    EARTH_GRAVITY
}

fn order_two() -> usize {
    2
}

impl FroudeSweepSpec {
    pub fn config(&self, c: f64, froude: f64) -> Result<ProblemConfig> {
        let t = self.trapezoid;
        if !(froude > 1.0) {
            return Err(Error::Config(format!("Froude number {froude} is not supercritical")));
        }
        let u0 = froude * (self.g * t.h0).sqrt();
        let mut k = Constants::new(0.0, u0, self.g);
        k.h0 = Some(t.h0);
        Ok(ProblemConfig::new(
            Formulation::SupercriticalChar,
            Bathymetry::trapezoid(t.length, t.delta0, t.kappa, c, t.h0)?,
            k,
            InitialData::Constant,
        )
        .with_domain(0.0, t.length))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FroudeRow {
    pub c: f64,
    pub froude: f64,
    pub n: usize,
    pub u0: f64,
    /// Largest sampled `eta` of the final profile and where it sits.
    pub max_eta: f64,
    pub x_max: f64,
    pub t_final: f64,
    pub steady_at: Option<f64>,
    /// Crest value of the exact smooth steady flow, when one exists.
    pub exact_max_eta: Option<f64>,
    /// Final `(x, eta)` at the nodes and element midpoints.
    #[serde(skip)]
    pub profile: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FroudeSweep {
    pub rows: Vec<FroudeRow>,
}

impl FroudeSweep {
    fn at(&self, c: f64, n: usize) -> Vec<&FroudeRow> {
        let mut v: Vec<_> = self.rows.iter().filter(|r| r.c == c && r.n == n).collect();
        v.sort_by(|a, b| a.froude.total_cmp(&b.froude));
        v
    }

    /// Whether max `eta` strictly decreases with `Fr` for this `c` and `n`.
    pub fn decreasing_in_froude(&self, c: f64, n: usize) -> bool {
        let v = self.at(c, n);
        v.len() >= 2 && v.windows(2).all(|w| w[1].max_eta < w[0].max_eta)
    }

    /// Largest relative difference in max `eta` between two resolutions.
    pub fn resolution_spread(&self, n1: usize, n2: usize) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for a in self.rows.iter().filter(|r| r.n == n1) {
            let b = self.rows.iter().find(|r| r.n == n2 && r.c == a.c && r.froude == a.froude)?;
            let d = (a.max_eta - b.max_eta).abs() / b.max_eta.abs();
            worst = Some(worst.map_or(d, |w: f64| w.max(d)));
        }
        worst
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("c,Fr,N,u0,max_eta,x_max,t_final,steady_at,exact_max_eta\n");
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.8e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{:.8e},{:.8e},{:.6e},{},{},{}",
                r.c,
                r.froude,
                r.n,
                r.u0,
                r.max_eta,
                r.x_max,
                r.t_final,
                opt(r.steady_at),
                opt(r.exact_max_eta)
            );
        }
        s
    }

    /// `x,eta` of one row's final profile.
    pub fn profile_csv(&self, row: usize) -> String {
        let mut s = String::from("x,eta\n");
        for (x, e) in &self.rows[row].profile {
            let _ = writeln!(s, "{x:.10e},{e:.12e}");
        }
        s
    }
}

pub fn froude_sweep(spec: &FroudeSweepSpec, threads: usize) -> Result<FroudeSweep> {
    if spec.ns.is_empty() || spec.froude.is_empty() || spec.c.is_empty() {
        return Err(Error::Config("Froude sweep needs Fr values, c values and resolutions".into()));
    }
    let tab = spec.tableau.resolve()?;
    let mut jobs = Vec::new();
    for &n in &spec.ns {
        for &c in &spec.c {
            for &fr in &spec.froude {
                jobs.push((n, c, fr));
            }
        }
    }
    let rows = map_rows(threads, jobs, |(n, c, froude)| -> Result<FroudeRow> {
        let cfg = spec.config(c, froude)?;
        let mesh = MeshSpec::uniform(n).build(&cfg)?;
        let scheme = Scheme::new(&cfg, mesh.clone(), &Discretization::with_order(spec.order))?;
        let s0 = scheme.initial_state()?;
        let opts = RunOptions { t0: 0.0, t_end: spec.t_end, dt: spec.dt, snapshots: vec![], steady: spec.steady };
        let out = run(&scheme, &tab, s0.coeffs(), &opts, &mut |_| {})?;
        let s1 = scheme.state_from_coeffs(out.t, &out.y)?;
        let profile: Vec<(f64, f64)> =
            sample_points(&mesh, 2).into_iter().map(|x| (x, scheme.eta(&s1, x))).collect();
        let (x_max, max_eta) = profile.iter().copied().fold((0.0, f64::NEG_INFINITY), |a, b| {
            if b.1 > a.1 {
                b
            } else {
                a
            }
        });
        let u0 = cfg.constants.u0;
        let exact_max_eta = solve_steady_on(&cfg.bathymetry, 0.0, u0, spec.g, 0.0, Some(cfg.right()), Branch::Supercritical)
            .ok()
            .map(|p| p.eta(0.5 * spec.trapezoid.length));
        Ok(FroudeRow {
            c,
            froude,
            n,
            u0,
            max_eta,
            x_max,
            t_final: out.t,
            steady_at: out.steady_at,
            exact_max_eta,
            profile,
        })
    })?;
    Ok(FroudeSweep { rows: rows.into_iter().collect::<Result<_>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(delta0: f64) -> FroudeSweepSpec {
        FroudeSweepSpec {
            trapezoid: TrapezoidSpec { length: 1e6, delta0, kappa: 1e5, h0: 1000.0 },
            g: EARTH_GRAVITY,
            froude: vec![2.5, 4.0],
            c: vec![1.0],
            ns: vec![100],
            order: 2,
            dt: 10.0,
            t_end: 2000.0,
            steady: None,
            tableau: TableauSpec::default(),
        }
    }

    #[test]
    fn flat_bottom_stays_flat() {
        let sw = froude_sweep(&spec(0.0), 0).unwrap();
        for r in &sw.rows {
            assert!(r.profile.iter().all(|&(_, e)| e.abs() < 1e-12), "{}", r.max_eta);
        }
    }

    #[test]
    fn subcritical_froude_is_rejected() {
        let mut s = spec(500.0);
        s.froude = vec![0.5];
        assert!(froude_sweep(&s, 0).is_err());
    }
}
