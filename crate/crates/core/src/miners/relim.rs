use alloc::vec::Vec;

use crate::db::{ItemId, TransactionDatabase};
use crate::itemset::{FrequentItemsetSet, Itemset};

/// A transaction suffix (ranks, ascending) with its multiplicity.
type Suffix = (u32, Vec<u32>);

/// Recursive elimination.
///
/// Frequent items are ranked by ascending support. Each transaction is
/// filed under its lowest-ranked item with the remaining ranks as suffix.
/// The lists are processed from the least frequent item up: the list's total
/// weight is that item's support, its suffixes form the conditional database
/// for the recursion, and afterwards the suffixes are re-filed under their
/// own leading item, which eliminates the current one.
pub fn relim(db: &TransactionDatabase, min_count: u32) -> FrequentItemsetSet {
    let mut out = FrequentItemsetSet::new(db.len());

    let supports = db.item_supports();
    let mut frequent: Vec<(ItemId, u32)> = supports
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > 0 && s >= min_count)
        .map(|(i, &s)| (ItemId(i as u32), s))
        .collect();
    frequent.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    if frequent.is_empty() {
        return out;
    }

    let mut rank_of = alloc::vec![u32::MAX; db.universe()];
    for (rank, &(item, _)) in frequent.iter().enumerate() {
        rank_of[item.index()] = rank as u32;
    }
    let items: Vec<ItemId> = frequent.iter().map(|&(i, _)| i).collect();

    let mut lists: Vec<Vec<Suffix>> = alloc::vec![Vec::new(); items.len()];
    for t in db.transactions() {
        let mut ranks: Vec<u32> = t.items().iter().map(|i| rank_of[i.index()]).filter(|&r| r != u32::MAX).collect();
        if ranks.is_empty() {
            continue;
        }
        ranks.sort_unstable();
        let lead = ranks.remove(0);
        lists[lead as usize].push((1, ranks));
    }

    let mut prefix = Vec::new();
    eliminate(lists, &items, &mut prefix, min_count, &mut out);
    out
}

fn eliminate(
    mut lists: Vec<Vec<Suffix>>,
    items: &[ItemId],
    prefix: &mut Vec<ItemId>,
    min_count: u32,
    out: &mut FrequentItemsetSet,
) {
    for rank in 0..lists.len() {
        let list = core::mem::take(&mut lists[rank]);
        let support: u32 = list.iter().map(|(w, _)| w).sum();

        if support >= min_count && support > 0 {
            prefix.push(items[rank]);
            out.insert(Itemset::new(prefix.clone()), support);

            let mut conditional: Vec<Vec<Suffix>> = alloc::vec![Vec::new(); lists.len()];
            let mut any = false;
            for (weight, suffix) in &list {
                if let Some((&lead, rest)) = suffix.split_first() {
                    conditional[lead as usize].push((*weight, rest.to_vec()));
                    any = true;
                }
            }
            if any {
                eliminate(conditional, items, prefix, min_count, out);
            }
            prefix.pop();
        }

        for (weight, mut suffix) in list {
            if !suffix.is_empty() {
                let lead = suffix.remove(0);
                lists[lead as usize].push((weight, suffix));
            }
        }
    }
}
