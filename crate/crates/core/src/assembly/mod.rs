//! Quadrature, Gram matrices, L2 projection, weak loads and norms.

pub mod banded;
mod quadrature;
mod table;

use std::sync::Arc;

pub use quadrature::{QuadratureRule, MAX_POINTS};
pub use table::{GramMatrix, MassMatrix, Projector, QuadTable};

use crate::error::Result;
use crate::mesh_space::{CoefVec, FemSpace, Mesh};

/// Points per element used by [`linf_error`] unless told otherwise.
pub const LINF_SAMPLES_PER_ELEMENT: usize = 20;

pub fn gauss_rule(s: usize) -> Result<QuadratureRule> {
    QuadratureRule::gauss(s)
}

pub fn mass_matrix(space: &Arc<FemSpace>, rule: &QuadratureRule) -> Result<MassMatrix> {
    QuadTable::new(space.clone(), rule).mass_matrix()
}

pub fn l2_project(space: &Arc<FemSpace>, f: impl Fn(f64) -> f64, rule: &QuadratureRule) -> Result<CoefVec> {
    Ok(Projector::new(space.clone(), rule)?.project(f))
}

/// `b_i = (g, phi_i)` by elementwise quadrature.
pub fn weak_load(space: &Arc<FemSpace>, g: impl Fn(f64) -> f64, rule: &QuadratureRule) -> Vec<f64> {
    QuadTable::new(space.clone(), rule).load_fn(g)
}

/// Quadrature L2 norm of a function of position over the mesh.
pub fn l2_norm_fn(mesh: &Mesh, f: impl Fn(f64) -> f64, rule: &QuadratureRule) -> f64 {
    (0..mesh.num_elements())
        .map(|e| {
            let (a, b) = mesh.element(e);
            rule.integrate(a, b, |x| f(x).powi(2))
        })
        .sum::<f64>()
        .sqrt()
}

pub fn l2_norm(f: &CoefVec, rule: &QuadratureRule) -> f64 {
    l2_norm_fn(f.space().mesh(), |x| f.eval_unchecked(x, 0), rule)
}

pub fn l2_error(fh: &CoefVec, exact: impl Fn(f64) -> f64, rule: &QuadratureRule) -> f64 {
    l2_norm_fn(fh.space().mesh(), |x| fh.eval_unchecked(x, 0) - exact(x), rule)
}

/// Maximum of `|f(x)|` over `per_element` equispaced points (endpoints
/// included) in every element.
pub fn linf_norm_fn(mesh: &Mesh, f: impl Fn(f64) -> f64, per_element: usize) -> f64 {
    let n = per_element.max(2);
    let mut m: f64 = 0.0;
    for e in 0..mesh.num_elements() {
        let (a, b) = mesh.element(e);
        for j in 0..n {
            let x = a + (b - a) * j as f64 / (n - 1) as f64;
            m = m.max(f(x).abs());
        }
    }
    m
}

pub fn linf_error(fh: &CoefVec, exact: impl Fn(f64) -> f64, per_element: usize) -> f64 {
    linf_norm_fn(fh.space().mesh(), |x| fh.eval_unchecked(x, 0) - exact(x), per_element)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh_space::Constraint;

    fn sp(n: usize, r: usize, k: usize, c: Constraint) -> Arc<FemSpace> {
        Arc::new(FemSpace::new(Arc::new(Mesh::uniform(n, 0.0, 1.0).unwrap()), r, k, c).unwrap())
    }

    #[test]
    fn hat_mass_matrix_entries() {
        let n = 10;
        let h = 0.1;
        let m = mass_matrix(&sp(n, 2, 0, Constraint::Free), &gauss_rule(3).unwrap()).unwrap();
        // closed-form integrals of hat products
        for i in 1..n {
            assert!((m.get(i, i) - 2.0 * h / 3.0).abs() < 1e-15);
            assert!((m.get(i, i + 1) - h / 6.0).abs() < 1e-15);
        }
        assert!((m.get(0, 0) - h / 3.0).abs() < 1e-15);
        assert_eq!(m.get(0, 2), 0.0);
    }

    #[test]
    fn mass_row_sums_are_basis_integrals() {
        for c in [Constraint::Free, Constraint::Periodic] {
            let s = sp(9, 4, 2, c);
            let rule = gauss_rule(5).unwrap();
            let m = mass_matrix(&s, &rule).unwrap();
            let ones = vec![1.0; s.dim()];
            let mut y = vec![0.0; s.dim()];
            m.mul(&ones, &mut y);
            let ints = weak_load(&s, |_| 1.0, &rule);
            for (a, b) in y.iter().zip(&ints) {
                assert!((a - b).abs() < 1e-15);
            }
            assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    assert_eq!(m.get(i, j), m.get(j, i));
                }
            }
        }
    }

    #[test]
    fn load_of_basis_function_is_mass_column() {
        let s = sp(6, 3, 1, Constraint::ZeroLeft);
        let rule = gauss_rule(4).unwrap();
        let m = mass_matrix(&s, &rule).unwrap();
        let j = 3;
        let phi = CoefVec::unit(s.clone(), j);
        let b = weak_load(&s, |x| phi.eval(x, 0).unwrap(), &rule);
        for (i, bi) in b.iter().enumerate() {
            assert!((bi - m.get(i, j)).abs() < 1e-15);
        }
        assert!(weak_load(&s, |_| 0.0, &rule).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn projection_of_constant() {
        let s = sp(13, 4, 2, Constraint::Periodic);
        let f = l2_project(&s, |_| 1.7, &gauss_rule(5).unwrap()).unwrap();
        for c in f.coeffs() {
            assert!((c - 1.7).abs() < 1e-13);
        }
    }

    #[test]
    fn projection_rate_cubic_splines() {
        let rule = gauss_rule(5).unwrap();
        let f = |x: f64| (2.0 * std::f64::consts::PI * x).sin();
        let err = |n| {
            let p = l2_project(&sp(n, 4, 2, Constraint::Free), f, &rule).unwrap();
            l2_error(&p, f, &gauss_rule(8).unwrap())
        };
        let ratio = err(40) / err(80);
        assert!((ratio - 16.0).abs() < 1.6, "ratio {ratio}");
    }

    #[test]
    fn norms_of_simple_functions() {
        let mesh = Mesh::uniform(7, 0.0, 1.0).unwrap();
        let rule = gauss_rule(3).unwrap();
        assert!((l2_norm_fn(&mesh, |_| 1.0, &rule) - 1.0).abs() < 1e-14);
        assert!((l2_norm_fn(&mesh, |x| x, &rule) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let s = sp(7, 2, 0, Constraint::Free);
        let f = s.interpolate(|x| 1.0 - 2.0 * x).unwrap();
        assert!(l2_error(&f, |x| 1.0 - 2.0 * x, &rule) < 1e-13);
        assert!(linf_error(&f, |x| 1.0 - 2.0 * x, 20) < 1e-13);
        assert!((l2_norm(&f, &rule) - (1.0f64 / 3.0).sqrt()).abs() < 1e-13);
    }
}
