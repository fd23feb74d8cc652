use std::sync::Arc;

use super::banded::{BandedCholesky, BandedSpd, CyclicBandedSpd, CyclicCholesky};
use super::quadrature::QuadratureRule;
use crate::error::Result;
use crate::mesh_space::{CoefVec, Constraint, FemSpace};

const NO_DOF: usize = usize::MAX;

/// Basis values and first derivatives of a space, tabulated at every
/// quadrature point of every element.
///
/// Point `q` of element `e` has flat index `e * s + q`; local function `a`
/// at that point is at `(e * s + q) * r + a`.
#[derive(Debug, Clone)]
pub struct QuadTable {
    space: Arc<FemSpace>,
    rule: QuadratureRule,
    r: usize,
    s: usize,
    n_el: usize,
    x: Vec<f64>,
    w: Vec<f64>,
    phi: Vec<f64>,
    dphi: Vec<f64>,
    dofs: Vec<usize>,
}

impl QuadTable {
    pub fn new(space: Arc<FemSpace>, rule: &QuadratureRule) -> Self {
        let r = space.order();
        let s = rule.points();
        let mesh = space.mesh().clone();
        let n_el = mesh.num_elements();
        let mut x = Vec::with_capacity(n_el * s);
        let mut w = Vec::with_capacity(n_el * s);
        let mut phi = Vec::with_capacity(n_el * s * r);
        let mut dphi = Vec::with_capacity(n_el * s * r);
        let mut dofs = Vec::with_capacity(n_el * r);
        let mut buf = vec![0.0; 2 * r];
        for e in 0..n_el {
            let (a, b) = mesh.element(e);
            let half = 0.5 * (b - a);
            for (xi, wi) in rule.nodes().iter().zip(rule.weights()) {
                let xq = a + half * (1.0 + xi);
                x.push(xq);
                w.push(half * wi);
                space.local_basis(e, xq, 1, &mut buf);
                phi.extend_from_slice(&buf[..r]);
                dphi.extend_from_slice(&buf[r..2 * r]);
            }
            dofs.extend(space.element_dofs(e).iter().map(|d| d.unwrap_or(NO_DOF)));
        }
        Self {
            space,
            rule: rule.clone(),
            r,
            s,
            n_el,
            x,
            w,
            phi,
            dphi,
            dofs,
        }
    }

    pub fn space(&self) -> &Arc<FemSpace> {
        &self.space
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn num_points(&self) -> usize {
        self.x.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.x
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Values (and optionally derivatives) of the function with
    /// coefficients `c` at all quadrature points.
    pub fn eval(&self, c: &[f64], vals: &mut [f64], ders: Option<&mut [f64]>) {
        let (r, s) = (self.r, self.s);
        let (phi, dphi) = (self.phi.chunks_exact(r * s), self.dphi.chunks_exact(r * s));
        let cells = self.dofs.chunks_exact(r).zip(phi.zip(dphi));
        let mut local = vec![0.0; r];
        let fill = |local: &mut [f64], dofs: &[usize]| {
            for (l, &d) in local.iter_mut().zip(dofs) {
                *l = if d == NO_DOF { 0.0 } else { c[d] };
            }
        };
        match ders {
            Some(ders) => {
                let out = vals.chunks_exact_mut(s).zip(ders.chunks_exact_mut(s));
                for ((dofs, (ph, dph)), (v, d)) in cells.zip(out) {
                    fill(&mut local, dofs);
                    for q in 0..s {
                        let (pq, dq) = (&ph[q * r..(q + 1) * r], &dph[q * r..(q + 1) * r]);
                        v[q] = pq.iter().zip(&local).map(|(a, b)| a * b).sum();
                        d[q] = dq.iter().zip(&local).map(|(a, b)| a * b).sum();
                    }
                }
            }
            None => {
                for ((dofs, (ph, _)), v) in cells.zip(vals.chunks_exact_mut(s)) {
                    fill(&mut local, dofs);
                    for q in 0..s {
                        v[q] = ph[q * r..(q + 1) * r].iter().zip(&local).map(|(a, b)| a * b).sum();
                    }
                }
            }
        }
    }

    /// `out[i] = sum_q w_q (g_q phi_i(x_q) + gx_q phi_i'(x_q))`.
    pub fn load(&self, g: &[f64], gx: Option<&[f64]>, out: &mut [f64]) {
        let (r, s) = (self.r, self.s);
        out.iter_mut().for_each(|v| *v = 0.0);
        let mut local = vec![0.0; r];
        for e in 0..self.n_el {
            local.iter_mut().for_each(|v| *v = 0.0);
            let pts = e * s..(e + 1) * s;
            let ph = &self.phi[e * s * r..(e + 1) * s * r];
            let dph = &self.dphi[e * s * r..(e + 1) * s * r];
            for (q, (&w, &gq)) in self.w[pts.clone()].iter().zip(&g[pts.clone()]).enumerate() {
                let wg = w * gq;
                for (l, &p) in local.iter_mut().zip(&ph[q * r..(q + 1) * r]) {
                    *l += wg * p;
                }
            }
            if let Some(gx) = gx {
                for (q, (&w, &gq)) in self.w[pts.clone()].iter().zip(&gx[pts]).enumerate() {
                    let wg = w * gq;
                    for (l, &p) in local.iter_mut().zip(&dph[q * r..(q + 1) * r]) {
                        *l += wg * p;
                    }
                }
            }
            for (&d, &l) in self.dofs[e * r..(e + 1) * r].iter().zip(&local) {
                if d != NO_DOF {
                    out[d] += l;
                }
            }
        }
    }

    /// Weak load of a function of position.
    pub fn load_fn(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let g: Vec<f64> = self.x.iter().map(|&x| f(x)).collect();
        let mut out = vec![0.0; self.space.dim()];
        self.load(&g, None, &mut out);
        out
    }

    pub fn integrate(&self, vals: &[f64]) -> f64 {
        self.w.iter().zip(vals).map(|(w, v)| w * v).sum()
    }

    /// Gram matrix of the basis under this rule, factored.
    pub fn mass_matrix(&self) -> Result<MassMatrix> {
        let n = self.space.dim();
        let bw = self.space.degree();
        let mut m = if self.space.constraint() == Constraint::Periodic {
            GramMatrix::Cyclic(CyclicBandedSpd::zeros(n, bw))
        } else {
            GramMatrix::Banded(BandedSpd::zeros(n, bw))
        };
        let (r, s) = (self.r, self.s);
        for e in 0..self.n_el {
            let dofs = &self.dofs[e * r..(e + 1) * r];
            for q in 0..s {
                let p = e * s + q;
                let phi = &self.phi[p * r..(p + 1) * r];
                for a in 0..r {
                    for b in 0..r {
                        let (i, j) = (dofs[a], dofs[b]);
                        if i == NO_DOF || j == NO_DOF || i < j {
                            continue;
                        }
                        let v = self.w[p] * phi[a] * phi[b];
                        match &mut m {
                            GramMatrix::Banded(m) => m.add_lower(i, j, v),
                            GramMatrix::Cyclic(m) => m.add_lower(i, j, v),
                        }
                    }
                }
            }
        }
        MassMatrix::factor(m)
    }
}

#[derive(Debug, Clone)]
pub enum GramMatrix {
    Banded(BandedSpd),
    Cyclic(CyclicBandedSpd),
}

#[derive(Debug, Clone)]
enum GramFactor {
    Banded(BandedCholesky),
    Cyclic(CyclicCholesky),
}

/// A factored mass matrix.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    matrix: GramMatrix,
    factor: GramFactor,
}

impl MassMatrix {
    fn factor(matrix: GramMatrix) -> Result<Self> {
        let factor = match &matrix {
            GramMatrix::Banded(m) => GramFactor::Banded(m.cholesky()?),
            GramMatrix::Cyclic(m) => GramFactor::Cyclic(m.cholesky()?),
        };
        Ok(Self { matrix, factor })
    }

    pub fn matrix(&self) -> &GramMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        match &self.matrix {
            GramMatrix::Banded(m) => m.dim(),
            GramMatrix::Cyclic(m) => m.dim(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.matrix {
            GramMatrix::Banded(m) => m.get(i, j),
            GramMatrix::Cyclic(m) => m.get(i, j),
        }
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        match &self.matrix {
            GramMatrix::Banded(m) => m.mul(x, y),
            GramMatrix::Cyclic(m) => m.mul(x, y),
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        match &self.factor {
            GramFactor::Banded(f) => f.solve_in_place(b),
            GramFactor::Cyclic(f) => f.solve_in_place(b),
        }
    }
}

/// L2 projection onto one space with a fixed quadrature rule.
#[derive(Debug, Clone)]
pub struct Projector {
    table: QuadTable,
    mass: MassMatrix,
}

impl Projector {
    pub fn new(space: Arc<FemSpace>, rule: &QuadratureRule) -> Result<Self> {
        let table = QuadTable::new(space, rule);
        let mass = table.mass_matrix()?;
        Ok(Self { table, mass })
    }

    pub fn from_parts(table: QuadTable, mass: MassMatrix) -> Self {
        Self { table, mass }
    }

    pub fn table(&self) -> &QuadTable {
        &self.table
    }

    pub fn mass(&self) -> &MassMatrix {
        &self.mass
    }

    pub fn project(&self, f: impl Fn(f64) -> f64) -> CoefVec {
        let mut b = self.table.load_fn(f);
        self.mass.solve_in_place(&mut b);
        CoefVec::new(self.table.space().clone(), b).expect("projection has the space dimension")
    }
}
