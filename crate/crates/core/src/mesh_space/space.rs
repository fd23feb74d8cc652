use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::bspline::basis_derivatives;
use super::mesh::Mesh;
use crate::error::{invalid, Error, Result};

/// Boundary behaviour imposed on every member of a [`FemSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Free,
    ZeroLeft,
    ZeroRight,
    ZeroBoth,
    Periodic,
}

/// Splines of order `r` (piecewise degree `r - 1`) that are `C^k` across
/// interior nodes, spanned by a B-spline basis whose interior knots have
/// multiplicity `r - 1 - k`.
///
/// Vanishing constraints drop the single endpoint-interpolating B-spline of
/// the clamped basis. Periodic spaces use the periodic extension of the knot
/// sequence and identify B-splines one period apart.
#[derive(Debug, Clone)]
pub struct FemSpace {
    mesh: Arc<Mesh>,
    order: usize,
    continuity: usize,
    constraint: Constraint,
    knots: Vec<f64>,
    spans: Vec<usize>,
    local_dofs: Vec<Option<usize>>,
    bspline_of_dof: Vec<usize>,
    bspline_count: usize,
    dim: usize,
}

impl FemSpace {
    pub fn new(mesh: Arc<Mesh>, order: usize, continuity: usize, constraint: Constraint) -> Result<Self> {
        if order < 2 {
            return invalid(format!("spline order must be at least 2, got {order}"));
        }
        if continuity + 2 > order {
            return invalid(format!(
                "continuity {continuity} exceeds order - 2 = {}",
                order as isize - 2
            ));
        }
        let p = order - 1;
        let mult = p - continuity;
        let n_el = mesh.num_elements();
        let nodes = mesh.nodes();

        let (knots, spans, bspline_count, first_bspline): (Vec<f64>, Vec<usize>, usize, Vec<isize>) =
            if constraint == Constraint::Periodic {
                let np = n_el * mult;
                if np <= 2 * p {
                    return invalid(format!(
                        "periodic space needs more than {} basis functions, mesh gives {np}",
                        2 * p
                    ));
                }
                let len = mesh.length();
                let tau = |j: isize| -> f64 {
                    let q = j.div_euclid(np as isize);
                    let r = j.rem_euclid(np as isize) as usize;
                    nodes[r / mult] + q as f64 * len
                };
                let knots = (0..np + 2 * p + 1).map(|i| tau(i as isize - p as isize)).collect();
                let spans = (0..n_el).map(|e| e * mult + mult - 1 + p).collect();
                let first = (0..n_el)
                    .map(|e| (e * mult + mult - 1) as isize - p as isize)
                    .collect();
                (knots, spans, np, first)
            } else {
                let mut knots = vec![mesh.left(); order];
                for &x in &nodes[1..n_el] {
                    knots.extend(std::iter::repeat(x).take(mult));
                }
                knots.extend(std::iter::repeat(mesh.right()).take(order));
                let n = order + (n_el - 1) * mult;
                let spans = (0..n_el).map(|e| p + e * mult).collect();
                let first = (0..n_el).map(|e| (e * mult) as isize).collect();
                (knots, spans, n, first)
            };

        let (drop_first, drop_last) = match constraint {
            Constraint::ZeroLeft => (true, false),
            Constraint::ZeroRight => (false, true),
            Constraint::ZeroBoth => (true, true),
            Constraint::Free | Constraint::Periodic => (false, false),
        };
        let dof_of = |b: isize| -> Option<usize> {
            if constraint == Constraint::Periodic {
                return Some(b.rem_euclid(bspline_count as isize) as usize);
            }
            let b = b as usize;
            if (drop_first && b == 0) || (drop_last && b == bspline_count - 1) {
                None
            } else {
                Some(b - drop_first as usize)
            }
        };
        let mut local_dofs = Vec::with_capacity(n_el * order);
        for &first in &first_bspline {
            for a in 0..order {
                local_dofs.push(dof_of(first + a as isize));
            }
        }
        let dim = bspline_count - drop_first as usize - drop_last as usize;
        if dim == 0 {
            return invalid("constrained space has no basis functions");
        }
        let bspline_of_dof = (0..dim).map(|d| d + drop_first as usize).collect();

        Ok(Self {
            mesh,
            order,
            continuity,
            constraint,
            knots,
            spans,
            local_dofs,
            bspline_of_dof,
            bspline_count,
            dim,
        })
    }

    /// Same mesh, order and continuity with a different constraint.
    pub fn with_constraint(&self, constraint: Constraint) -> Result<Self> {
        Self::new(self.mesh.clone(), self.order, self.continuity, constraint)
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.order - 1
    }

    pub fn continuity(&self) -> usize {
        self.continuity
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Global dof of each of the `order` B-splines living on element `e`
    /// (`None` for a dropped boundary function).
    pub fn element_dofs(&self, e: usize) -> &[Option<usize>] {
        &self.local_dofs[e * self.order..(e + 1) * self.order]
    }

    /// Values (`deriv = 0`) or derivatives of the local basis on element `e`
    /// at `x`, written to `out[k * order + a]` for `k = 0..=deriv`.
    pub fn local_basis(&self, e: usize, x: f64, deriv: usize, out: &mut [f64]) {
        basis_derivatives(&self.knots, self.spans[e], self.degree(), x, deriv, out);
    }

    /// Nonzero basis functions (or their `deriv`-th derivatives) at `x`.
    pub fn basis_at(&self, x: f64, deriv: usize) -> Result<Vec<(usize, f64)>> {
        self.check_point(x)?;
        let e = self.mesh.locate(x);
        let r = self.order;
        let mut buf = vec![0.0; (deriv + 1) * r];
        self.local_basis(e, x, deriv, &mut buf);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(r);
        for (a, dof) in self.element_dofs(e).iter().enumerate() {
            if let Some(d) = dof {
                let v = buf[deriv * r + a];
                match out.iter_mut().find(|(i, _)| i == d) {
                    Some(entry) => entry.1 += v,
                    None => out.push((*d, v)),
                }
            }
        }
        Ok(out)
    }

    fn check_point(&self, x: f64) -> Result<()> {
        if !self.mesh.contains(x) {
            return invalid(format!(
                "x = {x} outside the domain [{}, {}]",
                self.mesh.left(),
                self.mesh.right()
            ));
        }
        Ok(())
    }

    /// Greville abscissae of the retained basis functions, mapped into the
    /// domain. They are valid interpolation sites for the space.
    pub fn greville_points(&self) -> Vec<f64> {
        let p = self.degree();
        let len = self.mesh.length();
        (0..self.dim)
            .map(|d| {
                if self.constraint == Constraint::Periodic {
                    // knots[i] holds tau_{i - p}
                    let g = (d + p + 1..=d + 2 * p).map(|i| self.knots[i]).sum::<f64>() / p as f64;
                    let mut g = g;
                    while g >= self.mesh.right() {
                        g -= len;
                    }
                    while g < self.mesh.left() {
                        g += len;
                    }
                    g
                } else {
                    let b = self.bspline_of_dof[d];
                    (b + 1..=b + p).map(|i| self.knots[i]).sum::<f64>() / p as f64
                }
            })
            .collect()
    }

    /// Interpolant of `f` at the Greville abscissae.
    pub fn interpolate(self: &Arc<Self>, f: impl Fn(f64) -> f64) -> Result<CoefVec> {
        let pts = self.greville_points();
        let n = self.dim;
        let mut a = DMatrix::<f64>::zeros(n, n);
        for (i, &x) in pts.iter().enumerate() {
            for (j, v) in self.basis_at(x, 0)? {
                a[(i, j)] += v;
            }
        }
        let rhs = DVector::from_iterator(n, pts.iter().map(|&x| f(x)));
        let sol = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularMatrix("spline collocation matrix".into()))?;
        CoefVec::new(self.clone(), sol.iter().copied().collect())
    }

    /// True when `other` has the same knot vector (so coefficients can be
    /// moved between the two spaces by B-spline index).
    pub fn shares_basis_with(&self, other: &FemSpace) -> bool {
        self.knots == other.knots && (self.constraint == Constraint::Periodic) == (other.constraint == Constraint::Periodic)
    }
}

/// Coefficients of a member of a [`FemSpace`].
#[derive(Debug, Clone)]
pub struct CoefVec {
    space: Arc<FemSpace>,
    coeffs: Vec<f64>,
}

impl CoefVec {
    pub fn new(space: Arc<FemSpace>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return invalid(format!(
                "coefficient vector has length {}, space dimension is {}",
                coeffs.len(),
                space.dim()
            ));
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: Arc<FemSpace>) -> Self {
        let coeffs = vec![0.0; space.dim()];
        Self { space, coeffs }
    }

    /// Basis vector `e_j`.
    pub fn unit(space: Arc<FemSpace>, j: usize) -> Self {
        let mut v = Self::zeros(space);
        v.coeffs[j] = 1.0;
        v
    }

    pub fn space(&self) -> &Arc<FemSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `deriv`-th derivative at `x`. At interior breakpoints the limit from
    /// the right is returned; at the right endpoint the limit from the left.
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        self.space.check_point(x)?;
        Ok(self.eval_unchecked(x, deriv))
    }

    pub(crate) fn eval_unchecked(&self, x: f64, deriv: usize) -> f64 {
        let sp = &*self.space;
        let e = sp.mesh.locate(x);
        let r = sp.order;
        let mut buf = [0.0; 64];
        let need = (deriv + 1) * r;
        let mut heap;
        let buf: &mut [f64] = if need <= buf.len() {
            &mut buf[..need]
        } else {
            heap = vec![0.0; need];
            &mut heap
        };
        sp.local_basis(e, x, deriv, buf);
        sp.element_dofs(e)
            .iter()
            .enumerate()
            .filter_map(|(a, d)| d.map(|d| self.coeffs[d] * buf[deriv * r + a]))
            .sum()
    }

    /// Same function expressed in `target`, which must share the knot
    /// vector and keep every B-spline this vector uses. Dropped functions
    /// get zero coefficients.
    pub fn lift_to(&self, target: &Arc<FemSpace>) -> Result<CoefVec> {
        if !self.space.shares_basis_with(target) {
            return invalid("spaces do not share a B-spline basis");
        }
        let mut out = CoefVec::zeros(target.clone());
        let mut dof_in_target = vec![None; target.bspline_count];
        for (d, &b) in target.bspline_of_dof.iter().enumerate() {
            dof_in_target[b] = Some(d);
        }
        for (d, &b) in self.space.bspline_of_dof.iter().enumerate() {
            match dof_in_target[b] {
                Some(t) => out.coeffs[t] = self.coeffs[d],
                None if self.coeffs[d] == 0.0 => {}
                None => return invalid("target space drops a basis function in use"),
            }
        }
        Ok(out)
    }
}
