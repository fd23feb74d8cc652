mod common;

use common::{config, mesh};
use serde_json::json;
use swfem::semidiscrete::{Discretization, Scheme};
use swfem::time_integration::{run, ButcherTableau, RunOptions};

fn final_profiles(formulation: &str, n: usize) -> (Vec<f64>, Vec<f64>) {
    let cfg = config(json!({
        "formulation": formulation,
        "bathymetry": {"kind": "sinusoid", "depth": 1.0, "amplitude": 0.1, "period": 1.0},
        "constants": {"eta0": 0.0, "u0": 0.0, "g": 1.0},
        "initial": {"kind": "pulse", "eta_amp": 0.05, "u_amp": 0.1, "rate": 40.0, "center": 0.5}
    }));
    let scheme = Scheme::new(&cfg, mesh(n, 0.0, 0), &Discretization::default()).unwrap();
    let s0 = scheme.initial_state().unwrap();
    let dt = 0.1 / n as f64;
    let opts = RunOptions { t0: 0.0, t_end: 0.25, dt, snapshots: vec![], steady: None };
    let out = run(&scheme, &ButcherTableau::rk4(), s0.coeffs(), &opts, &mut |_| {}).unwrap();
    let s = scheme.state_from_coeffs(out.t, &out.y).unwrap();
    let xs = (0..400).map(|i| (i as f64 + 0.5) / 400.0);
    xs.map(|x| (scheme.eta(&s, x), scheme.u(&s, x))).unzip()
}

fn rms_gap(n: usize) -> f64 {
    let (ea, ua) = final_profiles("periodic_balance_law", n);
    let (eb, ub) = final_profiles("periodic_primitive", n);
    let sq = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64;
    (sq(&ea, &eb) + sq(&ua, &ub)).sqrt()
}

#[test]
fn periodic_forms_agree_to_discretization_error() {
    let (coarse, fine) = (rms_gap(100), rms_gap(200));
    assert!(coarse < 1e-3, "gap at N = 100: {coarse:e}");
    let rate = (coarse / fine).log2();
    assert!(rate > 1.7, "gap {coarse:e} -> {fine:e}, rate {rate}");
}
