//! Frequent itemset miners.
//!
//! Apriori, FP-Growth, Eclat and Relim differ only in how they search; all
//! four return exactly the itemsets whose support count reaches the
//! threshold, with those counts. [`mine_bruteforce`] enumerates every
//! sub-itemset of every transaction and serves as the reference for small
//! inputs.

mod apriori;
mod bruteforce;
mod eclat;
mod fpgrowth;
mod relim;

use core::fmt;
use core::str::FromStr;

pub use apriori::apriori;
pub use bruteforce::{bruteforce, MAX_BRUTEFORCE_WIDTH};
pub use eclat::eclat;
pub use fpgrowth::{fpgrowth, FpTree};
pub use relim::relim;

use crate::db::TransactionDatabase;
use crate::itemset::FrequentItemsetSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MiningError {
    #[error("min_support must be in (0, 1], got {0}")]
    InvalidSupport(f64),
    #[error("min_confidence must be in (0, 1], got {0}")]
    InvalidConfidence(f64),
    #[error("brute-force mining supports transactions of at most {max} items, found {found}")]
    TransactionTooWide { found: usize, max: usize },
}

/// Relative support and confidence thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningParams {
    min_support: f64,
    min_confidence: f64,
}

impl MiningParams {
    pub const DEFAULT_SUPPORT: f64 = 0.2;
    pub const DEFAULT_CONFIDENCE: f64 = 0.1;

    pub fn new(min_support: f64, min_confidence: f64) -> Result<Self, MiningError> {
        if !(min_support > 0.0 && min_support <= 1.0) {
            return Err(MiningError::InvalidSupport(min_support));
        }
        if !(min_confidence > 0.0 && min_confidence <= 1.0) {
            return Err(MiningError::InvalidConfidence(min_confidence));
        }
        Ok(Self { min_support, min_confidence })
    }

    pub fn min_support(&self) -> f64 {
        self.min_support
    }

    pub fn min_confidence(&self) -> f64 {
        self.min_confidence
    }

    /// `ceil(min_support * transactions)`, at least 1.
    ///
    /// Products within 1e-9 (relative) of an integer are treated as that
    /// integer, so 0.1 * 30 gives 3 rather than 4.
    pub fn min_support_count(&self, transactions: usize) -> u32 {
        let exact = self.min_support * transactions as f64;
        let nearest = libm::round(exact);
        let count = if libm::fabs(exact - nearest) <= 1e-9 * nearest.max(1.0) { nearest } else { libm::ceil(exact) };
        (count as u32).max(1)
    }
}

impl Default for MiningParams {
    fn default() -> Self {
        Self { min_support: Self::DEFAULT_SUPPORT, min_confidence: Self::DEFAULT_CONFIDENCE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Apriori,
    FpGrowth,
    Eclat,
    Relim,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Apriori, Algorithm::FpGrowth, Algorithm::Eclat, Algorithm::Relim];

    /// Command-line spelling.
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Apriori => "apriori",
            Algorithm::FpGrowth => "fpgrowth",
            Algorithm::Eclat => "eclat",
            Algorithm::Relim => "relim",
        }
    }

    /// Display name used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Apriori => "Apriori",
            Algorithm::FpGrowth => "FP-Growth",
            Algorithm::Eclat => "Eclat",
            Algorithm::Relim => "Relim",
        }
    }

    pub fn mine(self, db: &TransactionDatabase, params: &MiningParams) -> FrequentItemsetSet {
        self.mine_with_count(db, params.min_support_count(db.len()))
    }

    pub fn mine_with_count(self, db: &TransactionDatabase, min_count: u32) -> FrequentItemsetSet {
        match self {
            Algorithm::Apriori => apriori(db, min_count),
            Algorithm::FpGrowth => fpgrowth(db, min_count),
            Algorithm::Eclat => eclat(db, min_count),
            Algorithm::Relim => relim(db, min_count),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm `{0}` (expected apriori, fpgrowth, eclat or relim)")]
pub struct UnknownAlgorithm(pub alloc::string::String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "apriori" => Ok(Algorithm::Apriori),
            "fpgrowth" | "fp-growth" => Ok(Algorithm::FpGrowth),
            "eclat" => Ok(Algorithm::Eclat),
            "relim" => Ok(Algorithm::Relim),
            _ => Err(UnknownAlgorithm(s.into())),
        }
    }
}

pub fn mine_bruteforce(db: &TransactionDatabase, params: &MiningParams) -> Result<FrequentItemsetSet, MiningError> {
    bruteforce(db, params.min_support_count(db.len()))
}

pub fn mine_apriori(db: &TransactionDatabase, params: &MiningParams) -> FrequentItemsetSet {
    Algorithm::Apriori.mine(db, params)
}

pub fn mine_fpgrowth(db: &TransactionDatabase, params: &MiningParams) -> FrequentItemsetSet {
    Algorithm::FpGrowth.mine(db, params)
}

pub fn mine_eclat(db: &TransactionDatabase, params: &MiningParams) -> FrequentItemsetSet {
    Algorithm::Eclat.mine(db, params)
}

pub fn mine_relim(db: &TransactionDatabase, params: &MiningParams) -> FrequentItemsetSet {
    Algorithm::Relim.mine(db, params)
}
