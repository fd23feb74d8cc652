//! Property checks shared by the proptest suite and the acceptance runner.
//! Each returns the largest defect it finds; callers pick the tolerance.
#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use swfem::assembly::{gauss_rule, l2_norm, mass_matrix, weak_load, Projector};
use swfem::mesh_space::{CoefVec, Constraint, FemSpace, Mesh};
use swfem::problems::{Bathymetry, ProblemConfig};
use swfem::semidiscrete::{Discretization, Scheme, SimState, SourceMode};
use swfem::steady_state::{solve_steady, Branch};
use swfem::time_integration::{run, ButcherTableau, RunOptions};

pub fn mesh(n: usize, perturbation: f64, seed: u64) -> Arc<Mesh> {
    let m = if perturbation > 0.0 {
        Mesh::perturbed(n, 0.0, 1.0, perturbation, seed)
    } else {
        Mesh::uniform(n, 0.0, 1.0)
    };
    Arc::new(m.unwrap())
}

pub fn space(mesh: Arc<Mesh>, order: usize, continuity: usize, c: Constraint) -> Arc<FemSpace> {
    Arc::new(FemSpace::new(mesh, order, continuity, c).unwrap())
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Gauss rule with `s` points on `[a, b]` against the exact integral of the
/// polynomial with coefficients `c` (lowest first), relative to its scale.
pub fn quadrature_defect(s: usize, c: &[f64], a: f64, b: f64) -> f64 {
    let rule = gauss_rule(s).unwrap();
    let q = rule.integrate(a, b, |x| horner(c, x));
    let anti = |x: f64| c.iter().enumerate().map(|(k, ck)| ck * x.powi(k as i32 + 1) / (k + 1) as f64).sum::<f64>();
    let m = a.abs().max(b.abs()).max(1.0);
    let scale: f64 = c.iter().enumerate().map(|(k, ck)| ck.abs() * m.powi(k as i32)).sum::<f64>() * (b - a);
    (q - (anti(b) - anti(a))).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Largest asymmetry, smallest Rayleigh quotient over random vectors, and the
/// relative residual of a solve. Fails if the factorization fails.
pub fn mass_defects(sp: &Arc<FemSpace>, seed: u64) -> (f64, f64, f64) {
    let m = mass_matrix(sp, &gauss_rule(sp.order() + 1).unwrap()).unwrap();
    let n = m.dim();
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((m.get(i, j) - m.get(j, i)).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rayleigh = f64::INFINITY;
    let mut y = vec![0.0; n];
    for _ in 0..8 {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        m.mul(&x, &mut y);
        let xx: f64 = x.iter().map(|v| v * v).sum();
        rayleigh = rayleigh.min(x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / xx);
    }
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut x = b.clone();
    m.solve_in_place(&mut x);
    m.mul(&x, &mut y);
    let bn = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let res = y.iter().zip(&b).fold(0.0f64, |a, (p, q)| a.max((p - q).abs())) / bn;
    (asym, rayleigh, res)
}

/// `[idempotence, linearity, orthogonality]` defects of the L2 projection.
pub fn projection_defects(sp: &Arc<FemSpace>, a: f64, b: f64, k: f64) -> [f64; 3] {
    let rule = gauss_rule(sp.order() + 3).unwrap();
    let p = Projector::new(sp.clone(), &rule).unwrap();
    let f = |x: f64| (k * x).sin() + x * x;
    let g = |x: f64| (-(x - 0.3).powi(2) * k).exp();
    let pf = p.project(f);
    let pg = p.project(g);
    let ppf = p.project(|x| pf.eval(x, 0).unwrap());
    let idem = max_diff(pf.coeffs(), ppf.coeffs()) / max_abs(pf.coeffs());
    let pl = p.project(|x| a * f(x) + b * g(x));
    let comb: Vec<f64> = pf.coeffs().iter().zip(pg.coeffs()).map(|(u, v)| a * u + b * v).collect();
    let lin = max_diff(pl.coeffs(), &comb) / max_abs(&comb).max(1e-300);
    // the residual of the projection is orthogonal to every basis function
    let r = weak_load(sp, |x| f(x) - pf.eval(x, 0).unwrap(), &rule);
    let scale = max_abs(&weak_load(sp, |x| f(x).abs(), &rule));
    [idem, lin, max_abs(&r) / scale]
}

/// Projection of a polynomial of degree below the order, compared with the
/// polynomial at sample points.
pub fn reproduction_defect(sp: &Arc<FemSpace>, c: &[f64]) -> f64 {
    assert!(c.len() <= sp.order());
    let p = Projector::new(sp.clone(), &gauss_rule(sp.order() + 1).unwrap()).unwrap();
    let fh = p.project(|x| horner(c, x));
    let scale = c.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    (0..=200)
        .map(|i| i as f64 / 200.0)
        .map(|x| (fh.eval(x, 0).unwrap() - horner(c, x)).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Sum of B-spline values at sample points, minus one.
pub fn partition_defect(sp: &Arc<FemSpace>) -> f64 {
    (0..=97)
        .map(|i| i as f64 / 97.0)
        .map(|x| (sp.basis_at(x, 0).unwrap().iter().map(|(_, v)| v).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}

pub fn config(v: serde_json::Value) -> ProblemConfig {
    serde_json::from_value(v).unwrap()
}

fn sinusoid(amplitude: f64) -> serde_json::Value {
    json!({"kind": "sinusoid", "depth": 1.0, "amplitude": amplitude, "period": 1.0})
}

/// Larger L2 norm of the two time-derivative fields.
fn rhs_norm(scheme: &Scheme, s: &SimState) -> f64 {
    let rule = gauss_rule(scheme.discretization().order + 1).unwrap();
    let dy = scheme.rhs(s).unwrap();
    s.fields
        .iter()
        .zip(dy)
        .map(|(f, c)| l2_norm(&CoefVec::new(f.space().clone(), c).unwrap(), &rule))
        .fold(0.0, f64::max)
}

/// L2 size of the time derivative at `eta = eta0`, `u = 0` for the two `(eta, u)` forms.
pub fn still_water_defect(periodic: bool, amplitude: f64, eta0: f64, order: usize, n: usize) -> f64 {
    let (formulation, bottom) = if periodic {
        ("periodic_primitive", sinusoid(amplitude))
    } else {
        ("dirichlet_velocity", json!({"kind": "gaussian", "depth": 1.0, "amplitude": amplitude, "rate": 100.0, "center": 0.5}))
    };
    let cfg = config(json!({
        "formulation": formulation,
        "bathymetry": bottom,
        "constants": {"eta0": eta0, "u0": 0.0, "g": 1.0},
        "initial": {"kind": "constant"}
    }));
    let disc = Discretization { order, ..Default::default() };
    let scheme = Scheme::new(&cfg, mesh(n, 0.0, 0), &disc).unwrap();
    rhs_norm(&scheme, &scheme.initial_state().unwrap())
}

fn balance_law(amplitude: f64, initial: serde_json::Value) -> ProblemConfig {
    config(json!({
        "formulation": "periodic_balance_law",
        "bathymetry": sinusoid(amplitude),
        "constants": {"eta0": 0.0, "u0": 0.0, "g": 1.0},
        "initial": initial
    }))
}

/// L2 size of the time derivative of the balance-law form at `d = beta_h`, `q = 0`, with a
/// Gauss rule exact for the discrete momentum terms.
pub fn lake_at_rest_defect(amplitude: f64, order: usize, n: usize, source: SourceMode) -> f64 {
    let cfg = balance_law(amplitude, json!({"kind": "constant"}));
    let disc = Discretization {
        order,
        quadrature: Some((3 * order - 2).div_ceil(2)),
        source,
        ..Default::default()
    };
    let scheme = Scheme::new(&cfg, mesh(n, 0.0, 0), &disc).unwrap();
    let d = scheme.beta_h().expect("discrete bottom").coeffs().to_vec();
    let mut y = d.clone();
    y.extend(std::iter::repeat(0.0).take(scheme.dims()[1]));
    rhs_norm(&scheme, &scheme.state_from_coeffs(0.0, &y).unwrap())
}

fn total_mass(scheme: &Scheme, s: &SimState) -> f64 {
    let rule = gauss_rule(scheme.discretization().order + 2).unwrap();
    let m = scheme.mesh();
    (0..m.num_elements())
        .map(|e| {
            let (a, b) = m.element(e);
            rule.integrate(a, b, |x| s.fields[0].eval(x, 0).unwrap())
        })
        .sum()
}

/// Relative change of `int d` over `steps` RK4 steps from a moving pulse.
pub fn mass_drift(amplitude: f64, pulse: f64, order: usize, n: usize, steps: usize) -> f64 {
    let cfg = balance_law(
        amplitude,
        json!({"kind": "pulse", "eta_amp": pulse, "u_amp": 0.5 * pulse, "rate": 60.0, "center": 0.4}),
    );
    let disc = Discretization { order, ..Default::default() };
    let scheme = Scheme::new(&cfg, mesh(n, 0.2, 3), &disc).unwrap();
    let s0 = scheme.initial_state().unwrap();
    let dt = 0.1 / n as f64;
    let opts = RunOptions { t0: 0.0, t_end: dt * steps as f64, dt, snapshots: vec![], steady: None };
    let out = run(&scheme, &ButcherTableau::rk4(), s0.coeffs(), &opts, &mut |_| {}).unwrap();
    let s1 = scheme.state_from_coeffs(out.t, &out.y).unwrap();
    let m0 = total_mass(&scheme, &s0);
    (total_mass(&scheme, &s1) - m0).abs() / m0.abs()
}

/// Largest relative deviation of `d u` from `Q` and of `g eta + u^2/2`
/// from the head along a steady profile over a Gaussian bump.
pub fn steady_invariant_defect(amplitude: f64, u0: f64, branch: Branch) -> f64 {
    let bottom: Bathymetry = serde_json::from_value(json!({
        "kind": "gaussian", "depth": 1.0, "amplitude": amplitude, "rate": 50.0, "center": 0.5
    }))
    .unwrap();
    let p = solve_steady(&bottom, 0.0, u0, 1.0, 0.0, branch).unwrap();
    let (q, e) = (p.discharge(), p.head());
    (0..=300)
        .map(|i| i as f64 / 300.0)
        .map(|x| {
            let (eta, u) = (p.eta(x), p.u(x));
            let dq = ((bottom.beta(x) + eta) * u - q).abs() / q.abs();
            let de = (p.g() * eta + 0.5 * u * u - e).abs() / e.abs().max(0.5 * u0 * u0);
            dq.max(de)
        })
        .fold(0.0, f64::max)
}

/// `|value|` of every constrained field at its constrained ends, for random
/// coefficients, in the two characteristic formulations.
pub fn boundary_values(subcritical: bool, order: usize, n: usize, seed: u64) -> f64 {
    let cfg = if subcritical {
        config(json!({
            "formulation": "subcritical_char",
            "bathymetry": {"kind": "flat", "depth": 1.0},
            "constants": {"eta0": 0.0, "u0": 0.3, "g": 1.0},
            "initial": {"kind": "constant"}
        }))
    } else {
        config(json!({
            "formulation": "supercritical_char",
            "bathymetry": {"kind": "flat", "depth": 1.0},
            "constants": {"eta0": 0.0, "u0": 3.0, "g": 1.0},
            "initial": {"kind": "constant"}
        }))
    };
    let disc = Discretization { order, ..Default::default() };
    let scheme = Scheme::new(&cfg, mesh(n, 0.3, seed), &disc).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<f64> = (0..scheme.dims()[0] + scheme.dims()[1]).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let s = scheme.state_from_coeffs(0.0, &y).unwrap();
    let ends: [[bool; 2]; 2] = if subcritical { [[true, false], [false, true]] } else { [[true, false], [true, false]] };
    let mut worst = 0.0f64;
    for (f, [l, r]) in s.fields.iter().zip(ends) {
        if l {
            worst = worst.max(f.eval(0.0, 0).unwrap().abs());
        }
        if r {
            worst = worst.max(f.eval(1.0, 0).unwrap().abs());
        }
    }
    worst
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
