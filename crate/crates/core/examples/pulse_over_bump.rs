//! A surface pulse carried by supercritical flow across a bump, reported at
//! snapshot times through the run observer.

use std::sync::Arc;

use serde_json::json;
use swfem::mesh_space::Mesh;
use swfem::problems::ProblemConfig;
use swfem::semidiscrete::{Discretization, Scheme};
use swfem::time_integration::{run, ButcherTableau, Event, RunOptions};

fn main() -> swfem::Result<()> {
    let cfg: ProblemConfig = serde_json::from_value(json!({
        "formulation": "supercritical_char",
        "bathymetry": {"kind": "gaussian", "depth": 1.0, "amplitude": 0.04, "rate": 1000.0, "center": 0.75},
        "constants": {"eta0": 0.0, "u0": 3.0, "g": 1.0},
        "initial": {"kind": "pulse", "eta_amp": 0.05, "u_amp": 0.1, "rate": 400.0, "center": 0.25}
    }))?;
    let n = 400;
    let scheme = Scheme::new(&cfg, Arc::new(Mesh::uniform(n, 0.0, 1.0)?), &Discretization::default())?;
    let s0 = scheme.initial_state()?;
    let opts = RunOptions { t0: 0.0, t_end: 0.6, dt: 0.1 / n as f64, snapshots: vec![0.1, 0.2, 0.3, 0.4, 0.6], steady: None };
    let out = run(&scheme, &ButcherTableau::rk4(), s0.coeffs(), &opts, &mut |e| {
        if let Event::Snapshot { t, y, .. } = e {
            let s = scheme.state_from_coeffs(t, y).unwrap();
            let (x, peak) = (0..=n)
                .map(|i| i as f64 / n as f64)
                .map(|x| (x, scheme.eta(&s, x)))
                .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            println!("t = {t:.2}  max eta {peak:.5} at x = {x:.3}");
        }
    })?;
    println!("{} steps", out.steps);
    Ok(())
}
