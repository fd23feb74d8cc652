use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Explicit Runge–Kutta coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    name: String,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    order: usize,
}

const CONSISTENCY_TOL: f64 = 1e-12;

impl ButcherTableau {
    /// `a[i]` holds the `i` coefficients of stage `i` (row 0 is empty).
    pub fn new(name: &str, a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>, order: usize) -> Result<Self> {
        let s = b.len();
        if s == 0 || c.len() != s || a.len() != s {
            return invalid(format!("tableau {name}: inconsistent stage counts"));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() > i {
                if row[i..].iter().any(|&v| v != 0.0) {
                    return invalid(format!("tableau {name}: row {i} is not strictly lower"));
                }
            }
            let sum: f64 = row.iter().take(i).sum();
            if (sum - c[i]).abs() > CONSISTENCY_TOL {
                return invalid(format!("tableau {name}: c[{i}] = {} but row sums to {sum}", c[i]));
            }
        }
        let bsum: f64 = b.iter().sum();
        if (bsum - 1.0).abs() > CONSISTENCY_TOL {
            return invalid(format!("tableau {name}: weights sum to {bsum}"));
        }
        let a = a
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.resize(i, 0.0);
                row
            })
            .collect();
        Ok(Self { name: name.to_string(), a, b, c, order })
    }

    /// Kutta's third-order method.
    pub fn rk3() -> Self {
        Self::new(
            "rk3",
            vec![vec![], vec![0.5], vec![-1.0, 2.0]],
            vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 1.0],
            3,
        )
        .expect("valid tableau")
    }

    /// The classical four-stage method.
    pub fn rk4() -> Self {
        Self::new(
            "rk4",
            vec![vec![], vec![0.5], vec![0.0, 0.5], vec![0.0, 0.0, 1.0]],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 0.5, 1.0],
            4,
        )
        .expect("valid tableau")
    }

    /// Butcher's seven-stage sixth-order method.
    pub fn rk6() -> Self {
        Self::new(
            "rk6",
            vec![
                vec![],
                vec![1.0 / 3.0],
                vec![0.0, 2.0 / 3.0],
                vec![1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0],
                vec![-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0],
                vec![0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0],
                vec![9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0],
            ],
            vec![11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0, -4.0 / 15.0, -4.0 / 15.0, 11.0 / 120.0],
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 0.5, 0.5, 1.0],
            6,
        )
        .expect("valid tableau")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "rk3" => Ok(Self::rk3()),
            "rk4" => Ok(Self::rk4()),
            "rk6" => Ok(Self::rk6()),
            _ => Err(Error::Config(format!("unknown tableau {name:?}"))),
        }
    }

    /// Parses `s` rows of A (the first `i` entries of row `i` are used, so
    /// row 0 may be empty or all zeros), then a row of b, then a row of c.
    /// Entries may be decimals or fractions like `-3/8`. Text after `#` is
    /// ignored, and a line `order N` declares the nominal order.
    pub fn from_text(name: &str, text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut order = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("order") {
                order = rest.trim().parse().map_err(|_| {
                    Error::Config(format!("line {}: bad order {rest:?}", lineno + 1))
                })?;
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| parse_number(t).ok_or_else(|| {
                    Error::Config(format!("line {}: cannot parse {t:?}", lineno + 1))
                }))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.len() < 3 {
            return Err(Error::Config("tableau needs rows of A, b and c".into()));
        }
        let c = rows.pop().unwrap();
        let b = rows.pop().unwrap();
        if rows.len() == b.len() - 1 {
            rows.insert(0, Vec::new());
        }
        Self::new(name, rows, b, c, order).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self, i: usize) -> &[f64] {
        &self.a[i]
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Stability polynomial `R(z)` at a complex point, as `(re, im)`.
    pub fn stability(&self, re: f64, im: f64) -> (f64, f64) {
        // R(z) = 1 + z b^T (I - zA)^{-1} 1, by forward substitution
        let s = self.stages();
        let mut k: Vec<(f64, f64)> = Vec::with_capacity(s);
        for i in 0..s {
            let (mut sr, mut si) = (1.0, 0.0);
            for (j, &aij) in self.a[i].iter().enumerate() {
                let (kr, ki) = k[j];
                sr += aij * (re * kr - im * ki);
                si += aij * (re * ki + im * kr);
            }
            k.push((sr, si));
        }
        let (mut r, mut i) = (1.0, 0.0);
        for (j, &bj) in self.b.iter().enumerate() {
            let (kr, ki) = k[j];
            r += bj * (re * kr - im * ki);
            i += bj * (re * ki + im * kr);
        }
        (r, i)
    }
}

fn parse_number(t: &str) -> Option<f64> {
    match t.split_once('/') {
        Some((n, d)) => Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?),
        None => t.parse().ok(),
    }
}

impl fmt::Display for ButcherTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.name)?;
        writeln!(f, "order {}", self.order)?;
        for row in &self.a {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(f, "{}", if cells.is_empty() { "0".to_string() } else { cells.join(" ") })?;
        }
        let join = |v: &[f64]| v.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ");
        writeln!(f, "{}", join(&self.b))?;
        writeln!(f, "{}", join(&self.c))
    }
}

/// A tableau named in a config: a builtin name or a path to a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableauSpec {
    Named(String),
    File { file: String },
}

impl Default for TableauSpec {
    fn default() -> Self {
        Self::Named("rk4".into())
    }
}

impl TableauSpec {
    pub fn resolve(&self) -> Result<ButcherTableau> {
        match self {
            Self::Named(n) => ButcherTableau::by_name(n),
            Self::File { file } => {
                let text = std::fs::read_to_string(file)?;
                ButcherTableau::from_text(file, &text)
            }
        }
    }
}

impl FromStr for ButcherTableau {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_text("inline", s)
    }
}
