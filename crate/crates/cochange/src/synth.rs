//! Seeded synthetic change histories.
//!
//! Files are grouped into modules of up to eight. Each commit picks a module
//! (earlier modules more often, Zipf-like) and touches each of its files with
//! probability `density`; about one commit in ten also touches a random file
//! elsewhere. Commits are spaced `interval_secs` apart.

use cochange_core::{Timestamp, TransactionDatabase};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODULE_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub items: usize,
    pub transactions: usize,
    pub density: f64,
    pub start: Timestamp,
    pub interval_secs: i64,
}

impl SynthConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            items: 200,
            transactions: 1000,
            density: 0.3,
            // 2020-01-01T00:00:00Z
            start: Timestamp(1_577_836_800),
            interval_secs: 6 * 3600,
        }
    }
}

fn path(item: usize) -> String {
    format!("src/m{:03}/File{:04}.java", item / MODULE_SIZE, item)
}

pub fn synthesize(config: &SynthConfig) -> TransactionDatabase {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let items = config.items.max(1);
    let modules = items.div_ceil(MODULE_SIZE);
    let weights = WeightedIndex::new((1..=modules).map(|r| 1.0 / r as f64)).expect("at least one module");
    let density = config.density.clamp(0.0, 1.0);

    let mut builder = TransactionDatabase::builder();
    for t in 0..config.transactions {
        let module = weights.sample(&mut rng);
        let members = module * MODULE_SIZE..((module + 1) * MODULE_SIZE).min(items);
        let mut files: Vec<String> = members.clone().filter(|_| rng.gen_bool(density)).map(path).collect();
        if files.is_empty() {
            files.push(path(rng.gen_range(members)));
        }
        if rng.gen_bool(0.1) {
            files.push(path(rng.gen_range(0..items)));
        }
        let ts = Timestamp(config.start.seconds() + t as i64 * config.interval_secs);
        builder.push(format!("{:016x}{:08x}", config.seed, t), ts, &files);
    }
    builder.build()
}
