use std::fmt::Write as _;

use serde::Serialize;

/// Errors at or below this are roundoff and carry no rate.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// `log(e_prev / e) / log(n / n_prev)`; `None` when either error is at
/// roundoff level or not finite.
pub fn observed_rate(n_prev: f64, e_prev: f64, n: f64, e: f64) -> Option<f64> {
    let ok = |v: f64| v.is_finite() && v > ROUNDOFF_FLOOR;
    if !ok(e_prev) || !ok(e) || !(n > n_prev) || !ok(n_prev) {
        return None;
    }
    Some((e_prev / e).ln() / (n / n_prev).ln())
}

#[derive(Debug, Clone, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub errors: Vec<f64>,
    pub rates: Vec<Option<f64>>,
    /// Set when the run for this row did not finish.
    pub failure: Option<String>,
}

/// Errors per resolution and the rates between consecutive finished rows.
#[derive(Debug, Clone, Serialize)]
pub struct RateTable {
    /// Header of the resolution column.
    pub resolution: String,
    pub variables: Vec<String>,
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        Self {
            resolution: "N".into(),
            variables: variables.into_iter().map(Into::into).collect(),
            metadata: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    fn last_finished(&self) -> Option<&RateRow> {
        self.rows.iter().rev().find(|r| r.failure.is_none())
    }

    /// Appends a row; rates are taken against the previous finished row.
    pub fn push(&mut self, n: usize, errors: Vec<f64>) {
        assert_eq!(errors.len(), self.variables.len(), "one error per variable");
        let rates = match self.last_finished() {
            Some(p) => p
                .errors
                .iter()
                .zip(&errors)
                .map(|(&ep, &e)| observed_rate(p.n as f64, ep, n as f64, e))
                .collect(),
            None => vec![None; errors.len()],
        };
        self.rows.push(RateRow { n, errors, rates, failure: None });
    }

    pub fn push_failure(&mut self, n: usize, reason: impl Into<String>) {
        let k = self.variables.len();
        self.rows.push(RateRow {
            n,
            errors: vec![f64::NAN; k],
            rates: vec![None; k],
            failure: Some(reason.into()),
        });
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.failure.is_some())
    }

    /// Error of variable `var` at resolution `n`.
    pub fn error(&self, n: usize, var: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n && r.failure.is_none()).map(|r| r.errors[var])
    }

    /// Least-squares slope of `-log e` against `log N` over finished rows
    /// above roundoff. Needs at least two such rows.
    pub fn fitted_order(&self, var: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.failure.is_none())
            .map(|r| (r.n as f64, r.errors[var]))
            .filter(|&(n, e)| n > 0.0 && e.is_finite() && e > ROUNDOFF_FLOOR)
            .map(|(n, e)| (n.ln(), -e.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let m = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / m, b + p.1 / m));
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), p| {
            (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2))
        });
        (sxx > 0.0).then(|| sxy / sxx)
    }

    /// `# key = value` lines, then `N,err_<v>,rate_<v>,...,status`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for (i, v) in self.variables.iter().enumerate() {
            if let Some(p) = self.fitted_order(i) {
                let _ = writeln!(s, "# fitted_order_{v} = {p:.4}");
            }
        }
        s.push_str(&self.resolution);
        for v in &self.variables {
            let _ = write!(s, ",err_{v},rate_{v}");
        }
        s.push_str(",status\n");
        for r in &self.rows {
            let _ = write!(s, "{}", r.n);
            for (e, p) in r.errors.iter().zip(&r.rates) {
                let p = p.map(|p| format!("{p:.4}")).unwrap_or_default();
                if e.is_nan() {
                    let _ = write!(s, ",,{p}");
                } else {
                    let _ = write!(s, ",{e:.6e},{p}");
                }
            }
            let _ = writeln!(s, ",{}", r.failure.as_deref().unwrap_or("ok").replace(',', ";"));
        }
        s
    }
}
