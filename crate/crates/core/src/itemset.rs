use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Deref;

use crate::db::ItemId;

/// A sorted, duplicate-free set of items.
///
/// Orders by size first, then lexicographically, so maps keyed by
/// `Itemset` iterate 1-itemsets, then 2-itemsets, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    pub fn new(mut items: Vec<ItemId>) -> Self {
        items.sort_unstable();
        items.dedup();
        Self(items)
    }

    /// Caller guarantees `items` is strictly ascending.
    pub(crate) fn from_sorted(items: Vec<ItemId>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Self(items)
    }

    pub fn singleton(item: ItemId) -> Self {
        Self(alloc::vec![item])
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<ItemId> {
        self.0
    }
}

impl Deref for Itemset {
    type Target = [ItemId];

    fn deref(&self) -> &[ItemId] {
        &self.0
    }
}

impl Ord for Itemset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Itemset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<ItemId>> for Itemset {
    fn from(items: Vec<ItemId>) -> Self {
        Self::new(items)
    }
}

impl<const N: usize> From<[u32; N]> for Itemset {
    fn from(items: [u32; N]) -> Self {
        Self::new(items.iter().copied().map(ItemId).collect())
    }
}

/// Frequent itemsets with their absolute support counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequentItemsetSet {
    entries: BTreeMap<Itemset, u32>,
    transactions: usize,
}

impl FrequentItemsetSet {
    pub fn new(transactions: usize) -> Self {
        Self { entries: BTreeMap::new(), transactions }
    }

    /// Records `itemset` with `support`. Panics in debug builds if the same
    /// itemset is inserted twice with different supports.
    pub fn insert(&mut self, itemset: Itemset, support: u32) {
        let previous = self.entries.insert(itemset, support);
        debug_assert!(previous.is_none_or(|p| p == support));
    }

    pub fn support_count(&self, itemset: &[ItemId]) -> Option<u32> {
        // `Itemset`'s Ord only depends on the slice, so a temporary key is fine.
        self.entries.get(&Itemset(itemset.to_vec())).copied()
    }

    pub fn contains(&self, itemset: &[ItemId]) -> bool {
        self.support_count(itemset).is_some()
    }

    /// |D| of the mined database.
    pub fn transactions(&self) -> usize {
        self.transactions
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// By size, then lexicographic item order.
    pub fn iter(&self) -> btree_map::Iter<'_, Itemset, u32> {
        self.entries.iter()
    }

    pub fn of_size(&self, k: usize) -> impl Iterator<Item = (&Itemset, u32)> {
        self.entries.iter().filter(move |(s, _)| s.len() == k).map(|(s, &c)| (s, c))
    }

    pub fn max_size(&self) -> usize {
        self.entries.keys().next_back().map_or(0, |s| s.len())
    }

    /// Every itemset of `self` is in `other` with the same support.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.entries.iter().all(|(s, c)| other.entries.get(s) == Some(c))
    }
}

impl<'a> IntoIterator for &'a FrequentItemsetSet {
    type Item = (&'a Itemset, &'a u32);
    type IntoIter = btree_map::Iter<'a, Itemset, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}
