//! Error norms, convergence tables, well-balance drift and parameter sweeps.

mod convergence;
mod froude;
mod output;
mod rates;
mod wellbalance;

pub use convergence::{convergence_study, temporal_study, ConvergenceSpec, TemporalSpec};
pub use froude::{froude_sweep, FroudeRow, FroudeSweep, FroudeSweepSpec, TrapezoidSpec};
pub use output::{profile_csv, sample_points, state_errors};
pub use rates::{observed_rate, RateRow, RateTable, ROUNDOFF_FLOOR};
pub use wellbalance::{well_balance_study, BetaInit, DriftRow, DriftTable, WellBalanceSpec};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Maps `f` over independent rows: in order on the calling thread when
/// `threads == 0`, otherwise on a pool of that many threads. Output order
/// follows input order either way.
pub fn map_rows<T, R, F>(threads: usize, items: Vec<T>, f: F) -> Result<Vec<R>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    if threads == 0 {
        return Ok(items.into_iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.into_par_iter().map(f).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_keeps_order() {
        let xs: Vec<u64> = (0..64).collect();
        let a = map_rows(0, xs.clone(), |x| x * x).unwrap();
        let b = map_rows(3, xs, |x| x * x).unwrap();
        assert_eq!(a, b);
    }
}
