use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::assembly::{gauss_rule, l2_norm_fn};
use crate::diagnostics::{
    convergence_study, froude_sweep, profile_csv, sample_points, temporal_study, well_balance_study, DriftTable,
    FroudeSweep, RateTable,
};
use crate::error::{Error, Result};
use crate::semidiscrete::{Scheme, SimState};
use crate::steady_state::{solve_steady_on, steady_preservation_test, PreservationReport};
use crate::time_integration::{run, Event, RunOptions};

use super::config::{ConvergeConfig, RunSpec, SimulateConfig, SteadyConfig, Study, WellBalanceConfig};

/// Where results go; remembers what it wrote.
#[derive(Debug, Default)]
pub struct OutDir {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl OutDir {
    /// `None` discards all output.
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(Self { dir: dir.map(Path::to_path_buf), written: Vec::new() })
    }

    pub fn path(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        if let Some(d) = &self.dir {
            std::fs::write(d.join(name), contents)?;
        }
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}

pub fn converge(cfg: &ConvergeConfig, threads: usize, out: &mut OutDir) -> Result<RateTable> {
    let table = match &cfg.study {
        Study::Spatial(s) => convergence_study(&cfg.problem, s, threads)?,
        Study::Temporal(s) => temporal_study(&cfg.problem, s, threads)?,
    };
    out.write("rates.csv", &table.to_csv())?;
    Ok(table)
}

pub fn wellbalance(cfg: &WellBalanceConfig, threads: usize, out: &mut OutDir) -> Result<DriftTable> {
    let table = well_balance_study(&cfg.problem, &cfg.study, threads)?;
    out.write("drift.csv", &table.to_csv())?;
    Ok(table)
}

pub fn steady(cfg: &SteadyConfig, out: &mut OutDir) -> Result<PreservationReport> {
    let [left, right] = cfg.domain;
    let profile = solve_steady_on(&cfg.bathymetry, cfg.eta0, cfg.u0, cfg.g, left, Some(right), cfg.branch)?;
    let report = steady_preservation_test(&profile, cfg.formulation(), cfg.n, cfg.order, cfg.ratio, cfg.t_end)?;
    let mut s = String::from("N,r,dt,T,steps,drift_eta,drift_u\n");
    let _ = writeln!(
        s,
        "{},{},{:.6e},{},{},{:.6e},{:.6e}",
        report.n, report.order, report.dt, report.t_end, report.steps, report.drift[0], report.drift[1]
    );
    out.write("preservation.csv", &s)?;
    let xs: Vec<f64> = (0..=cfg.n).map(|i| left + (right - left) * i as f64 / cfg.n as f64).collect();
    out.write("steady_eta.csv", &profile_csv("eta", &xs, |x| profile.eta(x)))?;
    out.write("steady_u.csv", &profile_csv("u", &xs, |x| profile.u(x)))?;
    Ok(report)
}

/// Norms of one recorded state relative to the reference state `(eta0, u0)`
/// and to the previous snapshot.
#[derive(Debug, Clone, Serialize)]
pub struct SnapshotSummary {
    pub t: f64,
    pub eta_dev_l2: f64,
    pub u_dev_l2: f64,
    pub max_eta: f64,
    pub change_eta_l2: Option<f64>,
    pub change_u_l2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub steps: usize,
    pub snapshots: Vec<SnapshotSummary>,
    pub steady_at: Option<f64>,
    pub blow_up: Option<String>,
}

#[derive(Debug, Clone)]
pub enum SimulateReport {
    Run(RunReport),
    Sweep(FroudeSweep),
}

pub fn simulate(cfg: &SimulateConfig, threads: usize, out: &mut OutDir) -> Result<SimulateReport> {
    match cfg {
        SimulateConfig::Run(spec) => simulate_run(spec, out).map(SimulateReport::Run),
        SimulateConfig::FroudeSweep(spec) => {
            let sweep = froude_sweep(spec, threads)?;
            out.write("sweep.csv", &sweep.to_csv())?;
            for (i, r) in sweep.rows.iter().enumerate() {
                out.write(&format!("eta_c{}_Fr{}_N{}.csv", r.c, r.froude, r.n), &sweep.profile_csv(i))?;
            }
            for &c in &spec.c {
                let cfg = spec.config(c, spec.froude[0])?;
                let n = spec.ns[0];
                let xs: Vec<f64> = (0..=n).map(|i| cfg.right() * i as f64 / n as f64).collect();
                out.write(&format!("beta_c{c}.csv"), &profile_csv("beta", &xs, |x| cfg.bathymetry.beta(x)))?;
            }
            Ok(SimulateReport::Sweep(sweep))
        }
    }
}

fn simulate_run(spec: &RunSpec, out: &mut OutDir) -> Result<RunReport> {
    let cfg = &spec.problem;
    let mesh = spec.mesh.build(cfg)?;
    let scheme = Scheme::new(cfg, mesh.clone(), &spec.discretization)?;
    let tab = spec.tableau.resolve()?;
    let dt = spec.dt.dt(mesh.h_max())?;
    let s0 = scheme.initial_state()?;
    let opts = RunOptions { t0: 0.0, t_end: spec.t_end, dt, snapshots: spec.snapshots.clone(), steady: spec.steady };
    let mut states = vec![s0.clone()];
    let mut steady_at = None;
    let result = run(&scheme, &tab, s0.coeffs(), &opts, &mut |e| match e {
        Event::Snapshot { t, y, .. } => {
            if let Ok(s) = scheme.state_from_coeffs(t, y) {
                states.push(s)
            }
        }
        Event::SteadyReached { t, .. } => steady_at = Some(t),
        Event::Step { .. } => {}
    });
    let (steps, blow_up) = match result {
        Ok(o) => (o.steps, None),
        Err(Error::BlowUp { t, stage, .. }) => (0, Some(format!("blow-up at t = {t:.6} (stage {stage})"))),
        Err(e) => return Err(e),
    };

    let xs = sample_points(&mesh, spec.samples_per_element);
    out.write("beta.csv", &profile_csv("beta", &xs, |x| cfg.bathymetry.beta(x)))?;
    let rule = gauss_rule(spec.discretization.order + 3)?;
    let (eta0, u0) = (cfg.constants.eta0, cfg.constants.u0);
    let mut snapshots = Vec::new();
    let mut prev: Option<&SimState> = None;
    for s in &states {
        out.write(&format!("eta_t{}.csv", s.t), &profile_csv("eta", &xs, |x| scheme.eta(s, x)))?;
        out.write(&format!("u_t{}.csv", s.t), &profile_csv("u", &xs, |x| scheme.u(s, x)))?;
        let change = |f: &dyn Fn(&SimState, f64) -> f64| {
            prev.map(|p| l2_norm_fn(&mesh, |x| f(s, x) - f(p, x), &rule))
        };
        snapshots.push(SnapshotSummary {
            t: s.t,
            eta_dev_l2: l2_norm_fn(&mesh, |x| scheme.eta(s, x) - eta0, &rule),
            u_dev_l2: l2_norm_fn(&mesh, |x| scheme.u(s, x) - u0, &rule),
            max_eta: xs.iter().map(|&x| scheme.eta(s, x)).fold(f64::NEG_INFINITY, f64::max),
            change_eta_l2: change(&|s, x| scheme.eta(s, x)),
            change_u_l2: change(&|s, x| scheme.u(s, x)),
        });
        prev = Some(s);
    }
    let mut csv = String::from("t,eta_dev_l2,u_dev_l2,max_eta,change_eta_l2,change_u_l2\n");
    let opt = |v: Option<f64>| v.map(|v| format!("{v:.6e}")).unwrap_or_default();
    for r in &snapshots {
        let _ = writeln!(
            csv,
            "{},{:.6e},{:.6e},{:.8e},{},{}",
            r.t,
            r.eta_dev_l2,
            r.u_dev_l2,
            r.max_eta,
            opt(r.change_eta_l2),
            opt(r.change_u_l2)
        );
    }
    out.write("summary.csv", &csv)?;
    Ok(RunReport { steps, snapshots, steady_at, blow_up })
}
