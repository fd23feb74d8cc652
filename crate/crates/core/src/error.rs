use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("dry state: depth {depth:e} at x = {x} is below the floor {floor:e}")]
    DryState { x: f64, depth: f64, floor: f64 },

    /// A stage produced non-finite coefficients. `last_finite` holds the
    /// state at the start of the failing step.
    #[error("solution blew up in stage {stage} of the step starting at t = {t}")]
    BlowUp {
        t: f64,
        stage: usize,
        last_finite: LastState,
    },

    #[error(
        "no admissible steady state at x = {x}: beta = {beta} exceeds the critical value {beta_critical}"
    )]
    NoSteadyState {
        x: f64,
        beta: f64,
        beta_critical: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

/// Coefficients saved when a run blows up. `Debug` prints a summary only.
#[derive(Clone, PartialEq)]
pub struct LastState(pub Vec<f64>);

impl std::fmt::Debug for LastState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let max = self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        write!(f, "LastState {{ len: {}, max_abs: {max:e} }}", self.0.len())
    }
}

impl std::ops::Deref for LastState {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}
