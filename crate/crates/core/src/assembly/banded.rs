//! Symmetric positive definite banded and cyclic-banded matrices.

use crate::error::{Error, Result};

/// Symmetric banded matrix, lower band stored row by row:
/// `data[i * (bw + 1) + d] = A[i][i - d]`.
#[derive(Debug, Clone)]
pub struct BandedSpd {
    dim: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSpd {
    pub fn zeros(dim: usize, bw: usize) -> Self {
        Self {
            dim,
            bw,
            data: vec![0.0; dim * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[i * (self.bw + 1) + i - j]
        }
    }

    /// Adds `v` to the entry `(i, j)` with `i >= j` (and implicitly `(j, i)`).
    pub fn add_lower(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i >= j && i - j <= self.bw, "({i},{j}) outside the band");
        self.data[i * (self.bw + 1) + i - j] += v;
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        let bw = self.bw;
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.dim {
            let row = &self.data[i * (bw + 1)..(i + 1) * (bw + 1)];
            y[i] += row[0] * x[i];
            for d in 1..=bw.min(i) {
                let a = row[d];
                y[i] += a * x[i - d];
                y[i - d] += a * x[i];
            }
        }
    }

    pub fn cholesky(&self) -> Result<BandedCholesky> {
        let (n, bw) = (self.dim, self.bw);
        let w = bw + 1;
        let mut l = self.data.clone();
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let mut sum = l[i * w + i - j];
                for k in i.saturating_sub(bw)..j {
                    sum -= l[i * w + i - k] * l[j * w + j - k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(Error::SingularMatrix(format!(
                            "banded Cholesky: pivot {sum:e} at row {i}"
                        )));
                    }
                    l[i * w] = sum.sqrt();
                } else {
                    l[i * w + i - j] = sum / l[j * w];
                }
            }
        }
        let inv_diag = (0..n).map(|i| 1.0 / l[i * w]).collect();
        Ok(BandedCholesky { dim: n, bw, l, inv_diag })
    }
}

#[derive(Debug, Clone)]
pub struct BandedCholesky {
    dim: usize,
    bw: usize,
    l: Vec<f64>,
    inv_diag: Vec<f64>,
}

impl BandedCholesky {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, bw) = (self.dim, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * w + i - k] * b[k];
            }
            b[i] = s * self.inv_diag[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= self.l[k * w + k - i] * b[k];
            }
            b[i] = s * self.inv_diag[i];
        }
    }
}

/// Symmetric matrix that is banded except for coupling between the first
/// and last `bw` unknowns (periodic spline Gram matrices). Stored as
/// `[[A, B], [B^T, C]]` with `A` banded and the last `bw` unknowns as border.
#[derive(Debug, Clone)]
pub struct CyclicBandedSpd {
    dim: usize,
    bw: usize,
    inner: BandedSpd,
    border: Vec<f64>,
    corner: Vec<f64>,
}

impl CyclicBandedSpd {
    pub fn zeros(dim: usize, bw: usize) -> Self {
        assert!(dim > 2 * bw, "cyclic banded matrix too small for its bandwidth");
        let m = dim - bw;
        Self {
            dim,
            bw,
            inner: BandedSpd::zeros(m, bw),
            border: vec![0.0; m * bw],
            corner: vec![0.0; bw * bw],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_lower(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i >= j);
        let m = self.dim - self.bw;
        if i < m {
            self.inner.add_lower(i, j, v);
        } else if j < m {
            self.border[j * self.bw + i - m] += v;
        } else {
            let (a, b) = (i - m, j - m);
            self.corner[a * self.bw + b] += v;
            if a != b {
                self.corner[b * self.bw + a] += v;
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let m = self.dim - self.bw;
        if i < m {
            self.inner.get(i, j)
        } else if j < m {
            self.border[j * self.bw + i - m]
        } else {
            self.corner[(i - m) * self.bw + j - m]
        }
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        let (m, bw) = (self.dim - self.bw, self.bw);
        let (x1, x2) = x.split_at(m);
        let (y1, y2) = y.split_at_mut(m);
        self.inner.mul(x1, y1);
        for v in y2.iter_mut() {
            *v = 0.0;
        }
        for i in 0..m {
            for c in 0..bw {
                let b = self.border[i * bw + c];
                y1[i] += b * x2[c];
                y2[c] += b * x1[i];
            }
        }
        for a in 0..bw {
            for c in 0..bw {
                y2[a] += self.corner[a * bw + c] * x2[c];
            }
        }
    }

    /// Block elimination: Cholesky of `A`, then of the Schur complement
    /// `C - B^T A^{-1} B`.
    pub fn cholesky(&self) -> Result<CyclicCholesky> {
        let (m, bw) = (self.dim - self.bw, self.bw);
        let inner = self.inner.cholesky()?;
        let mut y = vec![0.0; m * bw];
        let mut col = vec![0.0; m];
        for c in 0..bw {
            for i in 0..m {
                col[i] = self.border[i * bw + c];
            }
            inner.solve_in_place(&mut col);
            for i in 0..m {
                y[i * bw + c] = col[i];
            }
        }
        let mut schur = self.corner.clone();
        for a in 0..bw {
            for c in 0..bw {
                let mut s = 0.0;
                for i in 0..m {
                    s += self.border[i * bw + a] * y[i * bw + c];
                }
                schur[a * bw + c] -= s;
            }
        }
        let schur = dense_cholesky(schur, bw)?;
        Ok(CyclicCholesky {
            dim: self.dim,
            bw,
            inner,
            border: self.border.clone(),
            y,
            schur,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CyclicCholesky {
    dim: usize,
    bw: usize,
    inner: BandedCholesky,
    border: Vec<f64>,
    y: Vec<f64>,
    schur: Vec<f64>,
}

impl CyclicCholesky {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (m, bw) = (self.dim - self.bw, self.bw);
        let (b1, b2) = b.split_at_mut(m);
        self.inner.solve_in_place(b1);
        for c in 0..bw {
            let mut s = 0.0;
            for i in 0..m {
                s += self.border[i * bw + c] * b1[i];
            }
            b2[c] -= s;
        }
        dense_solve(&self.schur, bw, b2);
        for i in 0..m {
            let mut s = 0.0;
            for c in 0..bw {
                s += self.y[i * bw + c] * b2[c];
            }
            b1[i] -= s;
        }
    }
}

fn dense_cholesky(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::SingularMatrix(format!(
                "Schur complement pivot {d:e} at {j}"
            )));
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    Ok(a)
}

fn dense_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}
