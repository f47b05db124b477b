use alloc::vec::Vec;

use crate::db::{tidset_intersect, to_vertical, ItemId, Tidset, TransactionDatabase};
use crate::itemset::{FrequentItemsetSet, Itemset};

/// Depth-first Eclat over the vertical layout.
///
/// The database is transposed once; every longer itemset's tidset is the
/// intersection of its parent's with a sibling's.
pub fn eclat(db: &TransactionDatabase, min_count: u32) -> FrequentItemsetSet {
    let vertical = to_vertical(db);
    let roots: Vec<(ItemId, Tidset)> = vertical
        .tidsets()
        .iter()
        .enumerate()
        .filter(|(_, tids)| !tids.is_empty() && tids.len() as u32 >= min_count)
        .map(|(i, tids)| (ItemId(i as u32), tids.clone()))
        .collect();

    let mut out = FrequentItemsetSet::new(db.len());
    let mut prefix = Vec::new();
    extend(&mut prefix, &roots, min_count, &mut out);
    out
}

/// `class` holds the frequent extensions of `prefix`, each with the tidset of
/// `prefix ∪ {item}`, in ascending item order.
fn extend(prefix: &mut Vec<ItemId>, class: &[(ItemId, Tidset)], min_count: u32, out: &mut FrequentItemsetSet) {
    for (i, (item, tids)) in class.iter().enumerate() {
        prefix.push(*item);
        out.insert(Itemset::from_sorted(prefix.clone()), tids.len() as u32);

        let next: Vec<(ItemId, Tidset)> = class[i + 1..]
            .iter()
            .filter_map(|(other, other_tids)| {
                let joined = tidset_intersect(tids, other_tids);
                (joined.len() as u32 >= min_count).then_some((*other, joined))
            })
            .collect();
        if !next.is_empty() {
            extend(prefix, &next, min_count, out);
        }
        prefix.pop();
    }
}
