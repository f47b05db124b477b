//! Wall-clock timing of mining plus rule generation.

use std::num::NonZeroUsize;
use std::time::Instant;

use cochange_core::eval::mine_rules;
use cochange_core::{Algorithm, MiningParams, TransactionDatabase};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct TimingResult {
    pub algorithm: Algorithm,
    /// Fastest repetition.
    pub seconds: f64,
    pub transactions: usize,
    pub params: MiningParams,
    /// Every repetition, in run order.
    pub samples: Vec<f64>,
}

/// Runs mining and rule generation `repetitions` times on an already loaded
/// database and keeps the fastest run. Must not overlap with other timed or
/// parallel work.
pub fn time_mining(
    algorithm: Algorithm,
    train: &TransactionDatabase,
    params: &MiningParams,
    repetitions: NonZeroUsize,
) -> Result<TimingResult> {
    let mut samples = Vec::with_capacity(repetitions.get());
    for _ in 0..repetitions.get() {
        let start = Instant::now();
        let rules = mine_rules(algorithm, train, params)?;
        let elapsed = start.elapsed();
        std::hint::black_box(rules);
        samples.push(elapsed.as_secs_f64());
    }
    let seconds = samples.iter().copied().fold(f64::INFINITY, f64::min);
    log::info!("{algorithm}: {seconds:.6}s over {} transactions", train.len());
    Ok(TimingResult { algorithm, seconds, transactions: train.len(), params: *params, samples })
}
