//! Supercritical flow over a trapezoidal sill for a few Froude numbers, on a
//! coarse mesh and a short horizon.

use serde_json::json;
use swfem::diagnostics::{froude_sweep, FroudeSweepSpec};

fn main() -> swfem::Result<()> {
    let spec: FroudeSweepSpec = serde_json::from_value(json!({
        "trapezoid": {"length": 1.0e6, "delta0": 500.0, "kappa": 1.0e5, "h0": 1000.0},
        "froude": [2.5, 3.0, 4.0],
        "c": [1.0],
        "ns": [200],
        "dt": 5.0,
        "t_end": 20000.0
    }))?;
    let sweep = froude_sweep(&spec, 0)?;
    for r in &sweep.rows {
        let exact = r.exact_max_eta.map_or("-".into(), |v| format!("{v:.2}"));
        println!("Fr = {}: max eta {:.2} m at x = {:.0} m (steady value {exact})", r.froude, r.max_eta, r.x_max);
    }
    println!("decreasing in Fr: {}", sweep.decreasing_in_froude(1.0, 200));
    Ok(())
}
