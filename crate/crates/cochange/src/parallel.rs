use cochange_core::eval::{sweep, sweep_support, validate_grid, SweepGrid, SweepRow};
use cochange_core::{Algorithm, TransactionDatabase};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// [`sweep`] with support levels spread over up to `jobs` threads. Rows come
/// back in the same order as the sequential sweep.
pub fn sweep_parallel(
    train: &TransactionDatabase,
    test: &TransactionDatabase,
    algorithm: Algorithm,
    supports: &[f64],
    confidences: &[f64],
    jobs: usize,
) -> Result<SweepGrid> {
    if jobs <= 1 {
        return Ok(sweep(train, test, algorithm, supports, confidences)?);
    }
    validate_grid(supports, confidences)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("cannot start worker pool: {e}")))?;
    let per_support: Vec<Vec<SweepRow>> = pool.install(|| {
        supports
            .par_iter()
            .map(|&s| sweep_support(algorithm, train, test, s, confidences))
            .collect::<std::result::Result<_, _>>()
    })?;
    Ok(SweepGrid { algorithm, rows: per_support.into_iter().flatten().collect() })
}
