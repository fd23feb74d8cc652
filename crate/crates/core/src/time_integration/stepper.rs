use serde::{Deserialize, Serialize};

use super::tableau::ButcherTableau;
use crate::error::{invalid, Error, LastState, Result};

/// Right-hand side of `y' = f(t, y)` on a flat vector.
pub trait OdeRhs {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> Result<()>;
}

impl<F> OdeRhs for (usize, F)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> Result<()> {
        (self.1)(t, y, dydt);
        Ok(())
    }
}

/// Stage storage reused across steps.
#[derive(Debug, Clone)]
pub struct Workspace {
    k: Vec<Vec<f64>>,
    stage: Vec<f64>,
}

impl Workspace {
    pub fn new(tableau: &ButcherTableau, dim: usize) -> Self {
        Self { k: vec![vec![0.0; dim]; tableau.stages()], stage: vec![0.0; dim] }
    }
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// One explicit RK step of size `dt` from `(t, y)`, in place.
pub fn rk_step(
    rhs: &dyn OdeRhs,
    tableau: &ButcherTableau,
    t: f64,
    y: &mut [f64],
    dt: f64,
    work: &mut Workspace,
) -> Result<()> {
    if !(dt > 0.0) {
        return invalid(format!("time step {dt} must be positive"));
    }
    let blow_up = |stage: usize, y: &[f64]| Error::BlowUp { t, stage, last_finite: LastState(y.to_vec()) };
    let s = tableau.stages();
    for i in 0..s {
        work.stage.copy_from_slice(y);
        for (j, &aij) in tableau.a(i).iter().enumerate() {
            if aij != 0.0 {
                let kj = &work.k[j];
                for (st, kv) in work.stage.iter_mut().zip(kj) {
                    *st += dt * aij * kv;
                }
            }
        }
        if i > 0 && !all_finite(&work.stage) {
            return Err(blow_up(i, y));
        }
        let ti = t + tableau.c()[i] * dt;
        let (k_i, stage) = (&mut work.k[i], &work.stage);
        match rhs.eval(ti, stage, k_i) {
            Ok(()) => {}
            Err(Error::DryState { .. }) | Err(Error::BlowUp { .. }) => return Err(blow_up(i, y)),
            Err(e) => return Err(e),
        }
        if !all_finite(k_i) {
            return Err(blow_up(i, y));
        }
    }
    work.stage.copy_from_slice(y);
    for (j, &bj) in tableau.b().iter().enumerate() {
        if bj != 0.0 {
            for (yv, kv) in work.stage.iter_mut().zip(&work.k[j]) {
                *yv += dt * bj * kv;
            }
        }
    }
    if !all_finite(&work.stage) {
        return Err(blow_up(s, y));
    }
    y.copy_from_slice(&work.stage);
    Ok(())
}

/// How the time step is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtRule {
    /// `dt = ratio * h_max`.
    Ratio(f64),
    Fixed(f64),
}

impl Default for DtRule {
    fn default() -> Self {
        Self::Ratio(0.1)
    }
}

impl DtRule {
    pub fn dt(&self, h_max: f64) -> Result<f64> {
        let dt = match *self {
            Self::Ratio(r) => r * h_max,
            Self::Fixed(dt) => dt,
        };
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("time step {dt} from {self:?} is not positive")));
        }
        Ok(dt)
    }
}

/// Something the run loop reports to observers.
#[derive(Debug)]
pub enum Event<'a> {
    Step { t: f64, y: &'a [f64] },
    Snapshot { index: usize, t: f64, y: &'a [f64] },
    /// First step after which the relative change per unit time fell below
    /// the monitor threshold.
    SteadyReached { t: f64, rate: f64 },
}

/// Relative coefficient change per unit time; fires once. With `stop` the
/// run ends at that step instead of continuing to `t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyMonitor {
    pub threshold: f64,
    #[serde(default)]
    pub stop: bool,
}

impl Default for SteadyMonitor {
    fn default() -> Self {
        Self { threshold: 1e-10, stop: false }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Times in `(t0, t_end]` at which the state is recorded; hit exactly.
    pub snapshots: Vec<f64>,
    pub steady: Option<SteadyMonitor>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub t: f64,
    pub y: Vec<f64>,
    pub steps: usize,
    pub snapshots: Vec<(f64, Vec<f64>)>,
    pub steady_at: Option<f64>,
}

/// Integrates from `opts.t0` to `opts.t_end`, landing exactly on every
/// snapshot time and on `t_end` by shortening the step before each.
pub fn run(
    rhs: &dyn OdeRhs,
    tableau: &ButcherTableau,
    y0: Vec<f64>,
    opts: &RunOptions,
    observer: &mut dyn FnMut(Event<'_>),
) -> Result<RunOutput> {
    let RunOptions { t0, t_end, dt, .. } = *opts;
    if !(t_end > t0) || !(dt > 0.0) {
        return invalid(format!("bad time window [{t0}, {t_end}] with dt = {dt}"));
    }
    if y0.len() != rhs.dim() {
        return invalid(format!("state has length {} but the system has {}", y0.len(), rhs.dim()));
    }
    let mut targets: Vec<f64> = opts.snapshots.clone();
    if targets.iter().any(|&s| !(s > t0 && s <= t_end)) {
        return Err(Error::Config(format!("snapshot times {targets:?} must lie in ({t0}, {t_end}]")));
    }
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    targets.dedup();
    let n_snap = targets.len();
    if targets.last() != Some(&t_end) {
        targets.push(t_end);
    }

    let mut work = Workspace::new(tableau, y0.len());
    let mut y = y0;
    let mut prev = y.clone();
    let mut t = t0;
    let mut steps = 0;
    let mut snapshots = Vec::with_capacity(n_snap);
    let mut steady_at = None;
    let slack = 1e-9 * dt;

    for (index, &target) in targets.iter().enumerate() {
        // steps of size dt measured from the segment start, so t does not drift
        let start = t;
        let mut k = 0usize;
        while t < target {
            let rem = target - t;
            if rem <= slack {
                break;
            }
            let (h, next) = if rem <= dt + slack {
                (rem, target)
            } else {
                k += 1;
                (start + k as f64 * dt - t, start + k as f64 * dt)
            };
            if opts.steady.is_some() && steady_at.is_none() {
                prev.copy_from_slice(&y);
            }
            rk_step(rhs, tableau, t, &mut y, h, &mut work)?;
            t = next;
            steps += 1;
            observer(Event::Step { t, y: &y });
            if let (Some(m), None) = (opts.steady, steady_at) {
                let mut num = 0.0;
                let mut den = 0.0;
                for (a, b) in y.iter().zip(&prev) {
                    num += (a - b) * (a - b);
                    den += a * a;
                }
                let rate = num.sqrt() / (h * den.sqrt().max(f64::MIN_POSITIVE));
                if rate < m.threshold {
                    steady_at = Some(t);
                    observer(Event::SteadyReached { t, rate });
                    if m.stop {
                        return Ok(RunOutput { t, y, steps, snapshots, steady_at });
                    }
                }
            }
        }
        t = target;
        if index < n_snap {
            observer(Event::Snapshot { index, t, y: &y });
            snapshots.push((t, y.clone()));
        }
    }
    Ok(RunOutput { t, y, steps, snapshots, steady_at })
}
