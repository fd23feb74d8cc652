//! Drift of still water over a steep bump in the periodic balance-law scheme,
//! for each way of bringing the bottom into the source term.

use serde_json::json;
use swfem::diagnostics::{well_balance_study, WellBalanceSpec};
use swfem::problems::ProblemConfig;

fn main() -> swfem::Result<()> {
    let problem: ProblemConfig = serde_json::from_value(json!({
        "formulation": "periodic_balance_law",
        "bathymetry": {"kind": "gaussian", "depth": 1.0, "amplitude": 0.3, "rate": 1000.0, "center": 0.5},
        "constants": {"g": 1.0},
        "initial": {"kind": "constant"}
    }))?;
    let spec: WellBalanceSpec = serde_json::from_value(json!({
        "n": 50, "order": 4, "dt": 0.01, "t_end": 0.5,
        "quadrature": [3, 5],
        "sources": ["analytic_beta", "projected_beta"]
    }))?;
    let table = well_balance_study(&problem, &spec, 0)?;
    print!("{}", table.to_csv());
    Ok(())
}
