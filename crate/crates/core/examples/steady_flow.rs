//! Exact steady flows over a Gaussian bump on both sides of critical, and how
//! well the Galerkin schemes hold them.

use swfem::problems::{Bathymetry, Formulation};
use swfem::steady_state::{solve_steady, steady_preservation_test, Branch};

fn main() -> swfem::Result<()> {
    let bottom = Bathymetry::Gaussian { depth: 1.0, amplitude: 0.2, rate: 100.0, center: 0.5 };
    for (u0, branch, formulation) in [
        (3.0, Branch::Supercritical, Formulation::SupercriticalChar),
        (0.3, Branch::Subcritical, Formulation::SubcriticalChar),
    ] {
        let p = solve_steady(&bottom, 0.0, u0, 1.0, 0.0, branch)?;
        let crest = p.eta(0.5);
        println!("{branch:?}: Q = {:.4}, head = {:.4}, eta over the crest = {crest:+.5}", p.discharge(), p.head());
        for n in [100, 200, 400] {
            let r = steady_preservation_test(&p, formulation, n, 2, 0.1, 0.2)?;
            println!("  N = {n}: drift after {} steps  eta {:.2e}  u {:.2e}", r.steps, r.drift[0], r.drift[1]);
        }
    }
    Ok(())
}
