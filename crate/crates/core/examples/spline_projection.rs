//! L2 projection of a smooth function onto spline spaces of several orders,
//! with the observed rate as the mesh is refined.

use std::sync::Arc;

use swfem::assembly::{gauss_rule, l2_error, l2_project};
use swfem::mesh_space::{Constraint, FemSpace, Mesh};

fn main() -> swfem::Result<()> {
    let f = |x: f64| (3.0 * x).sin() * (-x).exp();
    for order in [2, 3, 4] {
        let mut prev: Option<(usize, f64)> = None;
        println!("order {order} (degree {}), C^{}", order - 1, order - 2);
        for n in [8, 16, 32, 64] {
            let mesh = Arc::new(Mesh::uniform(n, 0.0, 1.0)?);
            let space = Arc::new(FemSpace::new(mesh, order, order - 2, Constraint::Free)?);
            let rule = gauss_rule(order + 2)?;
            let fh = l2_project(&space, f, &rule)?;
            let e = l2_error(&fh, f, &rule);
            let rate = prev.map(|(m, ep)| (ep / e).ln() / (n as f64 / m as f64).ln());
            println!("  N = {n:3}  dim = {:3}  error = {e:.3e}  rate = {}", space.dim(), rate.map_or("-".into(), |r| format!("{r:.2}")));
            prev = Some((n, e));
        }
    }
    Ok(())
}
