use std::fmt::Write as _;

use crate::assembly::{l2_norm_fn, QuadratureRule};
use crate::mesh_space::Mesh;
use crate::semidiscrete::{Scheme, SimState};

/// L2 errors of the physical `eta` and `u` of a state.
pub fn state_errors(
    scheme: &Scheme,
    s: &SimState,
    eta: impl Fn(f64) -> f64,
    u: impl Fn(f64) -> f64,
    rule: &QuadratureRule,
) -> [f64; 2] {
    let mesh = scheme.mesh();
    [
        l2_norm_fn(mesh, |x| scheme.eta(s, x) - eta(x), rule),
        l2_norm_fn(mesh, |x| scheme.u(s, x) - u(x), rule),
    ]
}

/// Mesh nodes plus `per_element - 1` equispaced interior points per element.
pub fn sample_points(mesh: &Mesh, per_element: usize) -> Vec<f64> {
    let k = per_element.max(1);
    let mut xs = Vec::with_capacity(mesh.num_elements() * k + 1);
    for e in 0..mesh.num_elements() {
        let (a, b) = mesh.element(e);
        for j in 0..k {
            xs.push(a + (b - a) * j as f64 / k as f64);
        }
    }
    xs.push(mesh.right());
    xs
}

/// Two-column `x,<name>` CSV.
pub fn profile_csv(name: &str, xs: &[f64], f: impl Fn(f64) -> f64) -> String {
    let mut s = format!("x,{name}\n");
    for &x in xs {
        let _ = writeln!(s, "{x:.10e},{:.12e}", f(x));
    }
    s
}
