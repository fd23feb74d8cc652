//! Spatial convergence of the supercritical scheme against a manufactured
//! solution, printed as the CSV the `converge` subcommand writes.

use swfem::diagnostics::{convergence_study, ConvergenceSpec};
use swfem::problems::ProblemConfig;
use swfem::semidiscrete::Discretization;
use swfem::time_integration::DtRule;

fn main() -> swfem::Result<()> {
    let problem = ProblemConfig::manufactured_supercritical();
    let spec = ConvergenceSpec::new(vec![20, 40, 80, 160], Discretization::default(), DtRule::Ratio(0.1), 1.0);
    let table = convergence_study(&problem, &spec, 0)?;
    print!("{}", table.to_csv());
    Ok(())
}
