use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

/// A partition `x_1 < x_2 < ... < x_{N+1}` of an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    h_max: f64,
    uniform: bool,
}

impl Mesh {
    /// `n` equal elements on `[left, right]`.
    pub fn uniform(n: usize, left: f64, right: f64) -> Result<Self> {
        check_bounds(n, left, right)?;
        let h = (right - left) / n as f64;
        let mut nodes: Vec<f64> = (0..=n).map(|i| left + i as f64 * h).collect();
        nodes[n] = right;
        Ok(Self {
            nodes,
            h_max: h,
            uniform: true,
        })
    }

    /// Uniform mesh whose interior nodes are shifted by at most
    /// `amplitude * h` in either direction, drawn deterministically from
    /// `seed`. Endpoints stay fixed.
    pub fn perturbed(n: usize, left: f64, right: f64, amplitude: f64, seed: u64) -> Result<Self> {
        if !(0.0..0.45).contains(&amplitude) {
            return invalid(format!("perturbation amplitude {amplitude} not in [0, 0.45)"));
        }
        let base = Self::uniform(n, left, right)?;
        if amplitude == 0.0 {
            return Ok(base);
        }
        let h = (right - left) / n as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = base.nodes;
        for x in nodes.iter_mut().take(n).skip(1) {
            *x += amplitude * h * rng.gen_range(-1.0..1.0);
        }
        Self::from_nodes(nodes)
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return invalid("a mesh needs at least two nodes");
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return invalid("mesh nodes must be finite");
        }
        let mut h_max: f64 = 0.0;
        let mut h_min = f64::INFINITY;
        for w in nodes.windows(2) {
            let h = w[1] - w[0];
            if h <= 0.0 {
                return invalid(format!("mesh nodes not strictly increasing at {}", w[0]));
            }
            h_max = h_max.max(h);
            h_min = h_min.min(h);
        }
        let uniform = (h_max - h_min) <= 1e-12 * h_max;
        Ok(Self {
            nodes,
            h_max,
            uniform,
        })
    }

    /// Moves every node lying within `tol` of one of `points` onto that point.
    pub fn snapped_to(&self, points: &[f64], tol: f64) -> Result<Self> {
        let mut nodes = self.nodes.clone();
        for x in nodes.iter_mut() {
            if let Some(p) = points.iter().find(|&&p| (p - *x).abs() < tol) {
                *x = *p;
            }
        }
        let uniform = self.uniform;
        let mut mesh = Self::from_nodes(nodes)?;
        mesh.uniform = uniform && mesh.uniform;
        Ok(mesh)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn num_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn right(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn length(&self) -> f64 {
        self.right() - self.left()
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.left() && x <= self.right()
    }

    /// Element holding `x`. Breakpoints belong to the element on their
    /// right, except the right endpoint which belongs to the last element.
    pub fn locate(&self, x: f64) -> usize {
        let n = self.num_elements();
        let idx = self.nodes.partition_point(|&node| node <= x);
        idx.saturating_sub(1).min(n - 1)
    }
}

fn check_bounds(n: usize, left: f64, right: f64) -> Result<()> {
    if n == 0 {
        return invalid("mesh needs at least one element");
    }
    if !left.is_finite() || !right.is_finite() || left >= right {
        return invalid(format!("bad mesh bounds [{left}, {right}]"));
    }
    Ok(())
}
