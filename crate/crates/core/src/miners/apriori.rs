use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::db::{is_sorted_subset, ItemId, TransactionDatabase};
use crate::itemset::{FrequentItemsetSet, Itemset};

/// Level-wise Apriori: join frequent k-itemsets that share a (k-1)-prefix,
/// prune candidates with an infrequent k-subset, count the survivors with a
/// database scan, and stop once a level produces no candidates.
pub fn apriori(db: &TransactionDatabase, min_count: u32) -> FrequentItemsetSet {
    let mut out = FrequentItemsetSet::new(db.len());

    let mut level: Vec<Vec<ItemId>> = Vec::new();
    for (i, &count) in db.item_supports().iter().enumerate() {
        if count >= min_count && count > 0 {
            let item = ItemId(i as u32);
            out.insert(Itemset::singleton(item), count);
            level.push(alloc::vec![item]);
        }
    }

    // Transactions reduced to items that can still take part in a frequent
    // itemset; shrinks as levels progress.
    let mut rows: Vec<Vec<ItemId>> = db.transactions().iter().map(|t| t.items().to_vec()).collect();

    while !level.is_empty() {
        let candidates = join_and_prune(&level);
        if candidates.is_empty() {
            break;
        }
        let k = candidates[0].len();

        let alive: BTreeSet<ItemId> = candidates.iter().flatten().copied().collect();
        rows.retain_mut(|row| {
            row.retain(|i| alive.contains(i));
            row.len() >= k
        });

        let mut counts = alloc::vec![0u32; candidates.len()];
        for row in &rows {
            for (c, count) in candidates.iter().zip(counts.iter_mut()) {
                if is_sorted_subset(c, row) {
                    *count += 1;
                }
            }
        }

        level = Vec::new();
        for (c, count) in candidates.into_iter().zip(counts) {
            if count >= min_count {
                out.insert(Itemset::from_sorted(c.clone()), count);
                level.push(c);
            }
        }
    }
    out
}

/// `level` holds the frequent k-itemsets in ascending lexicographic order.
fn join_and_prune(level: &[Vec<ItemId>]) -> Vec<Vec<ItemId>> {
    let frequent: BTreeSet<&[ItemId]> = level.iter().map(Vec::as_slice).collect();
    let k = level[0].len();
    let mut candidates = Vec::new();

    let mut start = 0;
    while start < level.len() {
        let prefix = &level[start][..k - 1];
        let mut end = start + 1;
        while end < level.len() && &level[end][..k - 1] == prefix {
            end += 1;
        }
        for i in start..end {
            for j in i + 1..end {
                let mut candidate = level[i].clone();
                candidate.push(level[j][k - 1]);
                if all_subsets_frequent(&candidate, &frequent) {
                    candidates.push(candidate);
                }
            }
        }
        start = end;
    }
    candidates
}

/// The two subsets obtained by dropping either of the last two items are the
/// join parents, so only the others need checking.
fn all_subsets_frequent(candidate: &[ItemId], frequent: &BTreeSet<&[ItemId]>) -> bool {
    let k = candidate.len();
    let mut subset = Vec::with_capacity(k - 1);
    (0..k.saturating_sub(2)).all(|skip| {
        subset.clear();
        subset.extend(candidate.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x));
        frequent.contains(subset.as_slice())
    })
}
