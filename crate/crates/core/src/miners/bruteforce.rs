use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::MiningError;
use crate::db::{ItemId, TransactionDatabase};
use crate::itemset::{FrequentItemsetSet, Itemset};

/// Widest transaction [`bruteforce`] accepts; each one expands to 2^n subsets.
pub const MAX_BRUTEFORCE_WIDTH: usize = 20;

/// Counts every non-empty subset of every transaction and keeps those
/// reaching `min_count`.
pub fn bruteforce(db: &TransactionDatabase, min_count: u32) -> Result<FrequentItemsetSet, MiningError> {
    let widest = db.transactions().iter().map(|t| t.len()).max().unwrap_or(0);
    if widest > MAX_BRUTEFORCE_WIDTH {
        return Err(MiningError::TransactionTooWide { found: widest, max: MAX_BRUTEFORCE_WIDTH });
    }

    let mut counts: BTreeMap<Vec<ItemId>, u32> = BTreeMap::new();
    for t in db.transactions() {
        let items = t.items();
        for mask in 1u32..(1 << items.len()) {
            let subset: Vec<ItemId> =
                items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &x)| x).collect();
            *counts.entry(subset).or_insert(0) += 1;
        }
    }

    let mut out = FrequentItemsetSet::new(db.len());
    for (items, count) in counts {
        if count >= min_count {
            out.insert(Itemset::from_sorted(items), count);
        }
    }
    Ok(out)
}
