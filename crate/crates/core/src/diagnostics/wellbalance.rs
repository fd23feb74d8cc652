use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::assembly::{gauss_rule, l2_norm_fn, l2_project, linf_norm_fn};
use crate::error::{Error, Result};
use crate::problems::{Formulation, ProblemConfig};
use crate::semidiscrete::{Discretization, FluxForm, MeshSpec, Scheme, SourceMode};
use crate::time_integration::{run, RunOptions, TableauSpec};

use super::map_rows;

/// How the initial depth is built from the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaInit {
    /// L2 projection with the run's quadrature rule.
    #[default]
    Projected,
    /// Spline interpolant at the Greville points.
    Interpolated,
}

/// Lake-at-rest drift of the balance-law scheme: one run per
/// `(source, quadrature)` pair starting from `d = beta_h`, `q = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellBalanceSpec {
    pub n: usize,
    #[serde(default = "cubic")]
    pub order: usize,
    pub dt: f64,
    pub t_end: f64,
    pub quadrature: Vec<usize>,
    pub sources: Vec<SourceMode>,
    #[serde(default)]
    pub init: BetaInit,
    #[serde(default)]
    pub flux: FluxForm,
    #[serde(default)]
    pub tableau: TableauSpec,
    /// Samples per element for the max norm.
    #[serde(default = "linf_samples")]
    pub linf_samples: usize,
}

fn cubic() -> usize {
    4
}

fn linf_samples() -> usize {
    20
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftRow {
    pub source: SourceMode,
    pub quadrature: usize,
    pub l2: f64,
    pub linf: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<DriftRow>,
}

impl DriftTable {
    pub fn row(&self, source: SourceMode, quadrature: usize) -> Option<&DriftRow> {
        self.rows.iter().find(|r| r.source == source && r.quadrature == quadrature)
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.failure.is_some())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s.push_str("source,s,l2_drift,linf_drift,status\n");
        for r in &self.rows {
            let src = serde_json::to_value(r.source).ok();
            let src = src.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
            let _ = writeln!(
                s,
                "{src},{},{:.6e},{:.6e},{}",
                r.quadrature,
                r.l2,
                r.linf,
                r.failure.as_deref().unwrap_or("ok")
            );
        }
        s
    }
}

/// L2 and max norms of `d_h(T) - d_h(0)` per row.
pub fn well_balance_study(cfg: &ProblemConfig, spec: &WellBalanceSpec, threads: usize) -> Result<DriftTable> {
    if cfg.formulation != Formulation::PeriodicBalanceLaw {
        return Err(Error::Config(format!(
            "well-balance study runs the periodic balance law, not {:?}",
            cfg.formulation
        )));
    }
    if spec.quadrature.is_empty() || spec.sources.is_empty() {
        return Err(Error::Config("well-balance study needs sources and quadrature rules".into()));
    }
    let tab = spec.tableau.resolve()?;
    let mesh = MeshSpec::uniform(spec.n).build(cfg)?;
    let norm = gauss_rule(spec.order + 3)?;
    let combos: Vec<(SourceMode, usize)> =
        spec.sources.iter().flat_map(|&m| spec.quadrature.iter().map(move |&s| (m, s))).collect();
    let rows = map_rows(threads, combos, |(source, s)| -> Result<DriftRow> {
        let disc = Discretization {
            quadrature: Some(s),
            source,
            flux: spec.flux,
            ..Discretization::with_order(spec.order)
        };
        let scheme = Scheme::new(cfg, mesh.clone(), &disc)?;
        let space = scheme.free_space();
        let beta = |x: f64| cfg.bathymetry.beta(x);
        let d0 = match spec.init {
            BetaInit::Projected => l2_project(space, beta, scheme.rule())?,
            BetaInit::Interpolated => space.interpolate(beta)?,
        };
        let mut y0 = d0.coeffs().to_vec();
        y0.resize(scheme.dims()[0] + scheme.dims()[1], 0.0);
        let opts = RunOptions { t0: 0.0, t_end: spec.t_end, dt: spec.dt, snapshots: vec![], steady: None };
        let (l2, linf, failure) = match run(&scheme, &tab, y0, &opts, &mut |_| {}) {
            Ok(out) => {
                let s1 = scheme.state_from_coeffs(out.t, &out.y)?;
                let diff = |x: f64| s1.fields[0].eval_unchecked(x, 0) - d0.eval_unchecked(x, 0);
                (l2_norm_fn(&mesh, diff, &norm), linf_norm_fn(&mesh, diff, spec.linf_samples), None)
            }
            Err(Error::BlowUp { t, .. }) => (f64::NAN, f64::NAN, Some(format!("blow-up at t = {t:.6}"))),
            Err(e) => return Err(e),
        };
        Ok(DriftRow { source, quadrature: s, l2, linf, failure })
    })?;
    Ok(DriftTable {
        metadata: vec![
            ("r".into(), spec.order.to_string()),
            ("N".into(), spec.n.to_string()),
            ("dt".into(), spec.dt.to_string()),
            ("T".into(), spec.t_end.to_string()),
            ("init".into(), format!("{:?}", spec.init)),
            ("flux".into(), format!("{:?}", spec.flux)),
            ("tableau".into(), tab.name().to_string()),
        ],
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}
