use std::sync::Arc;

use crate::assembly::{gauss_rule, MassMatrix, QuadTable, QuadratureRule};
use crate::error::{Error, Result};
use crate::mesh_space::{CoefVec, Constraint, FemSpace, Mesh};
use crate::problems::{Formulation, ManufacturedSolution, ProblemConfig};
use crate::time_integration::OdeRhs;

use super::options::{Discretization, FluxForm, SourceMode};

/// Time plus the two unknowns of the formulation: `(eta, u)`, deviations
/// `(eta - eta0, u - u0)`, `(v, w)` or `(d, q)`.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub fields: [CoefVec; 2],
}

impl SimState {
    pub fn coeffs(&self) -> Vec<f64> {
        let mut y = self.fields[0].coeffs().to_vec();
        y.extend_from_slice(self.fields[1].coeffs());
        y
    }
}

/// Semidiscrete Galerkin operator `dc/dt = M^{-1} F(t, c)` for one
/// formulation, mesh and space.
#[derive(Debug, Clone)]
pub struct Scheme {
    cfg: ProblemConfig,
    disc: Discretization,
    mesh: Arc<Mesh>,
    rule: QuadratureRule,
    tables: [QuadTable; 2],
    masses: [MassMatrix; 2],
    free: Arc<FemSpace>,
    beta_q: Vec<f64>,
    dbeta_q: Vec<f64>,
    beta_h: Option<CoefVec>,
    forcing: Option<ManufacturedSolution>,
    dims: [usize; 2],
}

fn constraints(f: Formulation) -> [Constraint; 2] {
    match f {
        Formulation::DirichletVelocity => [Constraint::Free, Constraint::ZeroBoth],
        Formulation::SupercriticalChar => [Constraint::ZeroLeft, Constraint::ZeroLeft],
        Formulation::SubcriticalChar => [Constraint::ZeroLeft, Constraint::ZeroRight],
        Formulation::PeriodicBalanceLaw | Formulation::PeriodicPrimitive => {
            [Constraint::Periodic, Constraint::Periodic]
        }
    }
}

impl Scheme {
    pub fn new(cfg: &ProblemConfig, mesh: Arc<Mesh>, disc: &Discretization) -> Result<Self> {
        cfg.validate()?;
        if (mesh.left() - cfg.left()).abs() > 1e-12 * cfg.right().abs().max(1.0)
            || (mesh.right() - cfg.right()).abs() > 1e-12 * cfg.right().abs().max(1.0)
        {
            return Err(Error::Config(format!(
                "mesh [{}, {}] does not cover the domain {:?}",
                mesh.left(),
                mesh.right(),
                cfg.domain
            )));
        }
        let r = disc.order;
        let k = disc.continuity();
        let rule = gauss_rule(disc.quadrature_points())?;
        let [c1, c2] = constraints(cfg.formulation);
        let s1 = Arc::new(FemSpace::new(mesh.clone(), r, k, c1)?);
        let s2 = if c2 == c1 { s1.clone() } else { Arc::new(s1.with_constraint(c2)?) };
        let base = if c1 == Constraint::Periodic { Constraint::Periodic } else { Constraint::Free };
        let free = if c1 == base { s1.clone() } else { Arc::new(s1.with_constraint(base)?) };
        let t1 = QuadTable::new(s1.clone(), &rule);
        let m1 = t1.mass_matrix()?;
        let (t2, m2) = if Arc::ptr_eq(&s1, &s2) {
            (t1.clone(), m1.clone())
        } else {
            let t2 = QuadTable::new(s2.clone(), &rule);
            let m2 = t2.mass_matrix()?;
            (t2, m2)
        };
        let dims = [s1.dim(), s2.dim()];

        let xs = t1.points();
        let (beta_h, beta_q, dbeta_q) = match disc.source {
            SourceMode::AnalyticBeta => (
                None,
                xs.iter().map(|&x| cfg.bathymetry.beta(x)).collect(),
                xs.iter().map(|&x| cfg.bathymetry.dbeta(x)).collect(),
            ),
            SourceMode::ProjectedBeta | SourceMode::InterpolatedBeta => {
                let bh = if disc.source == SourceMode::ProjectedBeta {
                    let table = QuadTable::new(free.clone(), &rule);
                    let mass = table.mass_matrix()?;
                    let mut c = table.load_fn(|x| cfg.bathymetry.beta(x));
                    mass.solve_in_place(&mut c);
                    CoefVec::new(free.clone(), c)?
                } else {
                    free.interpolate(|x| cfg.bathymetry.beta(x))?
                };
                let ft = QuadTable::new(free.clone(), &rule);
                let mut v = vec![0.0; xs.len()];
                let mut d = vec![0.0; xs.len()];
                ft.eval(bh.coeffs(), &mut v, Some(&mut d));
                (Some(bh), v, d)
            }
        };
        Ok(Self {
            cfg: cfg.clone(),
            disc: disc.clone(),
            mesh,
            rule,
            tables: [t1, t2],
            masses: [m1, m2],
            free,
            beta_q,
            dbeta_q,
            beta_h,
            forcing: cfg.manufactured_solution(),
            dims,
        })
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.cfg
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn formulation(&self) -> Formulation {
        self.cfg.formulation
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn spaces(&self) -> [&Arc<FemSpace>; 2] {
        [self.tables[0].space(), self.tables[1].space()]
    }

    /// The unconstrained (or periodic) space on the same mesh.
    pub fn free_space(&self) -> &Arc<FemSpace> {
        &self.free
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    /// The discrete bottom, when the source mode uses one.
    pub fn beta_h(&self) -> Option<&CoefVec> {
        self.beta_h.as_ref()
    }

    /// Drops the manufactured forcing, e.g. to run unforced from the same data.
    pub fn without_forcing(mut self) -> Self {
        self.forcing = None;
        self
    }

    fn project(&self, i: usize, f: impl Fn(f64) -> f64) -> Result<CoefVec> {
        let mut c = self.tables[i].load_fn(f);
        self.masses[i].solve_in_place(&mut c);
        CoefVec::new(self.tables[i].space().clone(), c)
    }

    /// State whose unknowns are the L2 projections of the given functions.
    pub fn state_from_fns(
        &self,
        t: f64,
        f1: impl Fn(f64) -> f64,
        f2: impl Fn(f64) -> f64,
    ) -> Result<SimState> {
        Ok(SimState { t, fields: [self.project(0, f1)?, self.project(1, f2)?] })
    }

    pub fn state_from_coeffs(&self, t: f64, y: &[f64]) -> Result<SimState> {
        if y.len() != self.dims[0] + self.dims[1] {
            return Err(Error::InvalidArgument(format!(
                "state length {} does not match {:?}",
                y.len(),
                self.dims
            )));
        }
        let (a, b) = y.split_at(self.dims[0]);
        Ok(SimState {
            t,
            fields: [
                CoefVec::new(self.tables[0].space().clone(), a.to_vec())?,
                CoefVec::new(self.tables[1].space().clone(), b.to_vec())?,
            ],
        })
    }

    /// Projected initial data of the configuration, transformed to the
    /// formulation's unknowns.
    pub fn initial_state(&self) -> Result<SimState> {
        let p = self.cfg.initial_profile()?;
        self.state_from_physical(0.0, |x| (p.eta)(x), |x| (p.u)(x))
    }

    /// Projection of physical `eta(x)`, `u(x)` into the formulation's unknowns.
    pub fn state_from_physical(
        &self,
        t: f64,
        eta: impl Fn(f64) -> f64,
        u: impl Fn(f64) -> f64,
    ) -> Result<SimState> {
        let c = &self.cfg.constants;
        let (eta0, u0, g) = (c.eta0, c.u0, c.g);
        let beta = |x: f64| self.cfg.bathymetry.beta(x);
        match self.formulation() {
            Formulation::DirichletVelocity | Formulation::PeriodicPrimitive => {
                self.state_from_fns(t, eta, u)
            }
            Formulation::SupercriticalChar => {
                self.state_from_fns(t, |x| eta(x) - eta0, |x| u(x) - u0)
            }
            Formulation::SubcriticalChar => {
                let c0 = self.cfg.c0();
                let dc = |x: f64| (g * (beta(x) + eta(x))).sqrt() - c0;
                self.state_from_fns(
                    t,
                    |x| 0.5 * (u(x) - u0) + dc(x),
                    |x| 0.5 * (u(x) - u0) - dc(x),
                )
            }
            Formulation::PeriodicBalanceLaw => self.state_from_fns(
                t,
                |x| beta(x) + eta(x),
                |x| (beta(x) + eta(x)) * u(x),
            ),
        }
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.mesh.left(), self.mesh.right())
    }

    fn field(&self, s: &SimState, i: usize, x: f64) -> f64 {
        s.fields[i].eval_unchecked(self.clamp(x), 0)
    }

    /// Physical free-surface elevation of a state at `x`.
    pub fn eta(&self, s: &SimState, x: f64) -> f64 {
        match self.formulation() {
            Formulation::DirichletVelocity | Formulation::PeriodicPrimitive => self.field(s, 0, x),
            Formulation::SupercriticalChar => self.cfg.constants.eta0 + self.field(s, 0, x),
            Formulation::SubcriticalChar => self.total_height(s, x) - self.cfg.bathymetry.beta(x),
            Formulation::PeriodicBalanceLaw => self.field(s, 0, x) - self.cfg.bathymetry.beta(x),
        }
    }

    /// Physical velocity of a state at `x`.
    pub fn u(&self, s: &SimState, x: f64) -> f64 {
        let u0 = self.cfg.constants.u0;
        match self.formulation() {
            Formulation::DirichletVelocity | Formulation::PeriodicPrimitive => self.field(s, 1, x),
            Formulation::SupercriticalChar => u0 + self.field(s, 1, x),
            Formulation::SubcriticalChar => self.field(s, 0, x) + self.field(s, 1, x) + u0,
            Formulation::PeriodicBalanceLaw => self.field(s, 1, x) / self.field(s, 0, x),
        }
    }

    /// Total height `H = beta + eta`; for the diagonal variables
    /// `H = ((v - w)/2 + c0)^2 / g`.
    pub fn total_height(&self, s: &SimState, x: f64) -> f64 {
        match self.formulation() {
            Formulation::SubcriticalChar => {
                let c = 0.5 * (self.field(s, 0, x) - self.field(s, 1, x)) + self.cfg.c0();
                c * c / self.cfg.g()
            }
            Formulation::PeriodicBalanceLaw => self.field(s, 0, x),
            _ => self.cfg.bathymetry.beta(x) + self.eta(s, x),
        }
    }

    /// `u_h = v_h + w_h + u0` as an element of the unconstrained space.
    pub fn recover_velocity(&self, s: &SimState) -> Result<CoefVec> {
        if self.formulation() != Formulation::SubcriticalChar {
            return Err(Error::InvalidArgument("velocity recovery needs diagonal variables".into()));
        }
        let v = s.fields[0].lift_to(&self.free)?;
        let w = s.fields[1].lift_to(&self.free)?;
        let u0 = self.cfg.constants.u0;
        // constants have unit coefficients in a B-spline basis
        let c = v.coeffs().iter().zip(w.coeffs()).map(|(a, b)| a + b + u0).collect();
        CoefVec::new(self.free.clone(), c)
    }

    /// L2 projection of the recovered total height onto the unconstrained space.
    pub fn project_total_height(&self, s: &SimState, rule: &QuadratureRule) -> Result<CoefVec> {
        crate::assembly::l2_project(&self.free, |x| self.total_height(s, x), rule)
    }

    /// Time derivative of a state.
    pub fn rhs(&self, s: &SimState) -> Result<[Vec<f64>; 2]> {
        let y = s.coeffs();
        let mut dy = vec![0.0; y.len()];
        self.eval(s.t, &y, &mut dy)?;
        let b = dy.split_off(self.dims[0]);
        Ok([dy, b])
    }
}

impl OdeRhs for Scheme {
    fn dim(&self) -> usize {
        self.dims[0] + self.dims[1]
    }

    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> Result<()> {
        let (y1, y2) = y.split_at(self.dims[0]);
        let np = self.tables[0].num_points();
        let mut a = vec![0.0; np];
        let mut ax = vec![0.0; np];
        let mut b = vec![0.0; np];
        let mut bx = vec![0.0; np];
        self.tables[0].eval(y1, &mut a, Some(&mut ax));
        self.tables[1].eval(y2, &mut b, Some(&mut bx));
        let mut g1 = vec![0.0; np];
        let mut g2 = vec![0.0; np];
        let mut g2x: Option<Vec<f64>> = None;
        let c = &self.cfg.constants;
        let (eta0, u0, g) = (c.eta0, c.u0, c.g);
        let (beta, dbeta) = (&self.beta_q, &self.dbeta_q);
        let xs = self.tables[0].points();

        match self.formulation() {
            Formulation::DirichletVelocity | Formulation::PeriodicPrimitive => {
                for p in 0..np {
                    let (eta, etax, u, ux) = (a[p], ax[p], b[p], bx[p]);
                    g1[p] = -(etax * u + (beta[p] + eta) * ux + dbeta[p] * u);
                    g2[p] = -(g * etax + u * ux);
                }
            }
            Formulation::SupercriticalChar => {
                for p in 0..np {
                    let (eta, etax, u, ux) = (a[p], ax[p], b[p], bx[p]);
                    g1[p] = -(u0 * etax
                        + (beta[p] + eta0) * ux
                        + etax * u
                        + eta * ux
                        + (u + u0) * dbeta[p]);
                    g2[p] = -(g * etax + u0 * ux + u * ux);
                }
            }
            Formulation::SubcriticalChar => {
                let c0 = self.cfg.c0();
                for p in 0..np {
                    let (v, vx, w, wx) = (a[p], ax[p], b[p], bx[p]);
                    let src = 0.5 * g * dbeta[p];
                    g1[p] = -((u0 + c0) * vx + 1.5 * v * vx + 0.5 * w * vx) + src;
                    g2[p] = -((u0 - c0) * wx + 1.5 * w * wx + 0.5 * v * wx) + src;
                }
            }
            Formulation::PeriodicBalanceLaw => {
                let floor = self.disc.depth_floor;
                if let Some(p) = (0..np).find(|&p| !(a[p] > floor)) {
                    return Err(Error::DryState { x: xs[p], depth: a[p], floor });
                }
                let weak = self.disc.flux == FluxForm::Weak;
                let mut fx = if weak { vec![0.0; np] } else { Vec::new() };
                for p in 0..np {
                    let (d, dx, q, qx) = (a[p], ax[p], b[p], bx[p]);
                    g1[p] = -qx;
                    let src = g * dbeta[p] * d;
                    if weak {
                        fx[p] = q * q / d + 0.5 * g * d * d;
                        g2[p] = src;
                    } else {
                        let flux_x = 2.0 * q * qx / d - q * q * dx / (d * d) + g * d * dx;
                        g2[p] = src - flux_x;
                    }
                }
                if weak {
                    g2x = Some(fx);
                }
            }
        }

        if let Some(m) = &self.forcing {
            for p in 0..np {
                let x = xs[p];
                match self.formulation() {
                    Formulation::SubcriticalChar => {
                        let (fv, fw) = m.forcing_characteristic(x, t);
                        g1[p] += fv;
                        g2[p] += fw;
                    }
                    Formulation::PeriodicBalanceLaw => {
                        g1[p] += m.forcing_eta(x, t);
                        g2[p] += m.forcing_discharge(x, t);
                    }
                    _ => {
                        g1[p] += m.forcing_eta(x, t);
                        g2[p] += m.forcing_u(x, t);
                    }
                }
            }
        }

        let (d1, d2) = dydt.split_at_mut(self.dims[0]);
        self.tables[0].load(&g1, None, d1);
        self.tables[1].load(&g2, g2x.as_deref(), d2);
        self.masses[0].solve_in_place(d1);
        self.masses[1].solve_in_place(d2);
        Ok(())
    }
}
