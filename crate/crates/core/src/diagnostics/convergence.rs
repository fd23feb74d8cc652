use serde::{Deserialize, Serialize};

use crate::assembly::gauss_rule;
use crate::error::{Error, Result};
use crate::problems::ProblemConfig;
use crate::semidiscrete::{Discretization, MeshSpec, Scheme, SimState};
use crate::time_integration::{run, ButcherTableau, DtRule, RunOptions, TableauSpec};

use super::output::state_errors;
use super::{map_rows, RateTable};

/// Spatial refinement study against the configuration's manufactured solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    /// Element counts, increasing.
    pub ns: Vec<usize>,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default)]
    pub dt: DtRule,
    pub t_end: f64,
    /// Gauss points per element for the error norm; `r + 3` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_points: Option<usize>,
    #[serde(default)]
    pub tableau: TableauSpec,
    /// Node jitter as a fraction of `h`.
    #[serde(default)]
    pub perturbation: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ConvergenceSpec {
    pub fn new(ns: Vec<usize>, discretization: Discretization, dt: DtRule, t_end: f64) -> Self {
        Self {
            ns,
            discretization,
            dt,
            t_end,
            norm_points: None,
            tableau: TableauSpec::default(),
            perturbation: 0.0,
            seed: 0,
        }
    }

    fn norm_points(&self) -> usize {
        self.norm_points.unwrap_or(self.discretization.order + 3)
    }

    fn check(&self) -> Result<()> {
        if self.ns.is_empty() || self.ns.windows(2).any(|w| w[1] <= w[0]) || self.ns[0] == 0 {
            return Err(Error::Config(format!("element counts {:?} must increase", self.ns)));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::Config(format!("final time {} is not positive", self.t_end)));
        }
        Ok(())
    }
}

fn metadata(mut t: RateTable, cfg: &ProblemConfig, d: &Discretization, tab: &ButcherTableau) -> RateTable {
    t = t
        .with_meta("formulation", format!("{:?}", cfg.formulation))
        .with_meta("r", d.order)
        .with_meta("continuity", d.continuity())
        .with_meta("quadrature_points", d.quadrature_points())
        .with_meta("source", format!("{:?}", d.source))
        .with_meta("flux", format!("{:?}", d.flux))
        .with_meta("tableau", tab.name());
    t
}

type RowOutcome = std::result::Result<[f64; 2], String>;

fn finish(
    scheme: &Scheme,
    tab: &ButcherTableau,
    s0: &SimState,
    dt: f64,
    t_end: f64,
) -> Result<std::result::Result<SimState, String>> {
    let opts = RunOptions { t0: s0.t, t_end, dt, snapshots: vec![], steady: None };
    match run(scheme, tab, s0.coeffs(), &opts, &mut |_| {}) {
        Ok(out) => Ok(Ok(scheme.state_from_coeffs(out.t, &out.y)?)),
        Err(Error::BlowUp { t, stage, .. }) => Ok(Err(format!("blow-up at t = {t:.6} (stage {stage})"))),
        Err(e) => Err(e),
    }
}

/// Runs every `N` to `t_end` and tabulates the L2 errors of the physical
/// `eta` and `u` against the manufactured solution, with rates.
pub fn convergence_study(cfg: &ProblemConfig, spec: &ConvergenceSpec, threads: usize) -> Result<RateTable> {
    spec.check()?;
    let exact = cfg
        .manufactured_solution()
        .ok_or_else(|| Error::Config("convergence study needs a manufactured solution".into()))?;
    let tab = spec.tableau.resolve()?;
    let rule = gauss_rule(spec.norm_points())?;
    let t_end = spec.t_end;
    let rows: Vec<Result<RowOutcome>> = map_rows(threads, spec.ns.clone(), |n| {
        let mesh = MeshSpec { n, perturbation: spec.perturbation, seed: spec.seed, snap_to_kinks: true }
            .build(cfg)?;
        let scheme = Scheme::new(cfg, mesh.clone(), &spec.discretization)?;
        let dt = spec.dt.dt(mesh.h_max())?;
        let s0 = scheme.initial_state()?;
        Ok(finish(&scheme, &tab, &s0, dt, t_end)?.map(|s| {
            state_errors(&scheme, &s, |x| exact.eta(x, t_end), |x| exact.u(x, t_end), &rule)
        }))
    })?;

    let mut table = metadata(RateTable::new(["eta", "u"]), cfg, &spec.discretization, &tab)
        .with_meta("dt", format!("{:?}", spec.dt))
        .with_meta("T", t_end)
        .with_meta("norm_points", spec.norm_points())
        .with_meta("perturbation", spec.perturbation);
    for (&n, row) in spec.ns.iter().zip(rows) {
        match row? {
            Ok(e) => table.push(n, e.to_vec()),
            Err(why) => table.push_failure(n, why),
        }
    }
    Ok(table)
}

/// Temporal self-convergence at a fixed mesh: each `dt = ratio * h` run is
/// compared with a run at `reference_ratio * h`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemporalSpec {
    pub n: usize,
    #[serde(default)]
    pub discretization: Discretization,
    /// Decreasing step ratios `dt / h`.
    pub ratios: Vec<f64>,
    pub reference_ratio: f64,
    pub t_end: f64,
    #[serde(default)]
    pub tableau: TableauSpec,
}

/// The resolution column is the number of steps, so rates are orders in `dt`.
pub fn temporal_study(cfg: &ProblemConfig, spec: &TemporalSpec, threads: usize) -> Result<RateTable> {
    if spec.ratios.is_empty()
        || spec.ratios.windows(2).any(|w| w[1] >= w[0])
        || spec.ratios.iter().any(|&r| r <= spec.reference_ratio || r <= 0.0)
    {
        return Err(Error::Config(format!(
            "ratios {:?} must decrease and stay above the reference {}",
            spec.ratios, spec.reference_ratio
        )));
    }
    let tab = spec.tableau.resolve()?;
    let mesh = MeshSpec::uniform(spec.n).build(cfg)?;
    let scheme = Scheme::new(cfg, mesh.clone(), &spec.discretization)?;
    let rule = gauss_rule(spec.discretization.order + 3)?;
    let s0 = scheme.initial_state()?;
    let h = mesh.h_max();
    let mut all = spec.ratios.clone();
    all.push(spec.reference_ratio);
    let finals = map_rows(threads, all, |r| finish(&scheme, &tab, &s0, r * h, spec.t_end))?;
    let mut finals: Vec<_> = finals.into_iter().collect::<Result<_>>()?;
    let reference = match finals.pop() {
        Some(Ok(s)) => s,
        Some(Err(why)) => return Err(Error::Config(format!("reference run failed: {why}"))),
        None => unreachable!(),
    };

    let mut table = metadata(RateTable::new(["eta", "u"]), cfg, &spec.discretization, &tab)
        .with_meta("N", spec.n)
        .with_meta("T", spec.t_end)
        .with_meta("reference_ratio", spec.reference_ratio);
    table.resolution = "steps".into();
    for (&r, fin) in spec.ratios.iter().zip(finals) {
        let steps = (spec.t_end / (r * h)).ceil() as usize;
        match fin {
            Ok(s) => table.push(
                steps,
                state_errors(&scheme, &s, |x| scheme.eta(&reference, x), |x| scheme.u(&reference, x), &rule)
                    .to_vec(),
            ),
            Err(why) => table.push_failure(steps, why),
        }
    }
    Ok(table)
}
