//! Transaction databases in horizontal and vertical layout.
//!
//! Files are interned into dense [`ItemId`]s in first-seen order. A
//! [`TransactionDatabase`] keeps its transactions sorted by timestamp, ties
//! broken by commit id, so every downstream split and mining run sees the
//! same order for the same input.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Dense handle for an interned file path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}", self.0)
    }
}

/// Seconds since the Unix epoch, UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Timestamp(pub i64);

impl Timestamp {
    #[inline]
    pub const fn seconds(self) -> i64 {
        self.0
    }
}

/// Bidirectional map between file paths and [`ItemId`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interner {
    ids: BTreeMap<String, ItemId>,
    paths: Vec<String>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `path`, assigning the next dense id on first sight.
    pub fn intern(&mut self, path: &str) -> ItemId {
        if let Some(&id) = self.ids.get(path) {
            return id;
        }
        let id = ItemId(u32::try_from(self.paths.len()).expect("more than u32::MAX distinct paths"));
        self.paths.push(String::from(path));
        self.ids.insert(String::from(path), id);
        id
    }

    pub fn get(&self, path: &str) -> Option<ItemId> {
        self.ids.get(path).copied()
    }

    /// Panics if `id` was not produced by this interner.
    pub fn resolve(&self, id: ItemId) -> &str {
        &self.paths[id.index()]
    }

    pub fn try_resolve(&self, id: ItemId) -> Option<&str> {
        self.paths.get(id.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> impl ExactSizeIterator<Item = &str> {
        self.paths.iter().map(String::as_str)
    }
}

/// Interns `paths` into a fresh interner, returning the id of each input.
pub fn intern_paths<S: AsRef<str>>(paths: &[S]) -> (Interner, Vec<ItemId>) {
    let mut interner = Interner::new();
    let ids = paths.iter().map(|p| interner.intern(p.as_ref())).collect();
    (interner, ids)
}

/// The set of files changed together in one commit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    id: String,
    timestamp: Timestamp,
    items: Vec<ItemId>,
}

impl Transaction {
    /// Items are sorted and deduplicated.
    pub fn new(id: impl Into<String>, timestamp: Timestamp, mut items: Vec<ItemId>) -> Self {
        items.sort_unstable();
        items.dedup();
        Self { id: id.into(), timestamp, items }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn timestamp(&self) -> Timestamp {
        self.timestamp
    }

    /// Strictly ascending.
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    /// True when every element of the sorted slice `itemset` is present.
    pub fn contains_all(&self, itemset: &[ItemId]) -> bool {
        is_sorted_subset(itemset, &self.items)
    }
}

/// Merge-walk subset test over two strictly ascending slices.
pub(crate) fn is_sorted_subset(needle: &[ItemId], haystack: &[ItemId]) -> bool {
    if needle.len() > haystack.len() {
        return false;
    }
    let mut h = haystack.iter();
    'outer: for n in needle {
        for x in h.by_ref() {
            match x.cmp(n) {
                core::cmp::Ordering::Less => continue,
                core::cmp::Ordering::Equal => continue 'outer,
                core::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DbError {
    #[error("transaction {txn} references item {item} outside a universe of {universe} items")]
    ItemOutOfUniverse { txn: String, item: u32, universe: usize },
}

/// Chronologically ordered transactions over a shared item universe.
///
/// Equality is by content: two databases are equal when they hold the same
/// transactions with the same ids, timestamps and file paths, regardless of
/// how the paths were numbered.
#[derive(Debug, Clone)]
pub struct TransactionDatabase {
    interner: Arc<Interner>,
    transactions: Vec<Transaction>,
}

impl TransactionDatabase {
    pub fn new(interner: Arc<Interner>, mut transactions: Vec<Transaction>) -> Result<Self, DbError> {
        let universe = interner.len();
        for t in &transactions {
            if let Some(&item) = t.items.last() {
                if item.index() >= universe {
                    return Err(DbError::ItemOutOfUniverse { txn: t.id.clone(), item: item.0, universe });
                }
            }
        }
        transactions.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
        Ok(Self { interner, transactions })
    }

    pub fn empty() -> Self {
        Self { interner: Arc::new(Interner::new()), transactions: Vec::new() }
    }

    pub fn builder() -> DatabaseBuilder {
        DatabaseBuilder::default()
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub fn shared_interner(&self) -> Arc<Interner> {
        Arc::clone(&self.interner)
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Number of item ids the interner has handed out.
    pub fn universe(&self) -> usize {
        self.interner.len()
    }

    /// A database over the same interner holding the given, already ordered,
    /// transactions.
    pub(crate) fn with_transactions(&self, transactions: Vec<Transaction>) -> Self {
        Self { interner: Arc::clone(&self.interner), transactions }
    }

    /// Keeps the transactions for which `keep` returns true, preserving order.
    pub fn retain(&self, mut keep: impl FnMut(&Transaction) -> bool) -> Self {
        self.with_transactions(self.transactions.iter().filter(|t| keep(t)).cloned().collect())
    }

    /// Splits at `index`: `[0, index)` and `[index, len)`.
    pub fn split_at(&self, index: usize) -> (Self, Self) {
        let (a, b) = self.transactions.split_at(index);
        (self.with_transactions(a.to_vec()), self.with_transactions(b.to_vec()))
    }

    /// Sorted file paths of transaction `index`.
    pub fn paths_of(&self, index: usize) -> Vec<&str> {
        let mut paths: Vec<&str> = self.transactions[index].items.iter().map(|&i| self.interner.resolve(i)).collect();
        paths.sort_unstable();
        paths
    }

    /// Transaction count per item id.
    pub fn item_supports(&self) -> Vec<u32> {
        let mut counts = alloc::vec![0u32; self.universe()];
        for t in &self.transactions {
            for &i in &t.items {
                counts[i.index()] += 1;
            }
        }
        counts
    }

    /// Number of transactions containing every item of the sorted slice.
    pub fn support_count(&self, itemset: &[ItemId]) -> u32 {
        self.transactions.iter().filter(|t| t.contains_all(itemset)).count() as u32
    }

    /// Items that occur in at least one transaction, ascending.
    pub fn present_items(&self) -> Vec<ItemId> {
        self.item_supports().iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| ItemId(i as u32)).collect()
    }
}

impl PartialEq for TransactionDatabase {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|i| {
                let (a, b) = (&self.transactions[i], &other.transactions[i]);
                a.id == b.id && a.timestamp == b.timestamp && self.paths_of(i) == other.paths_of(i)
            })
    }
}

impl Eq for TransactionDatabase {}

/// Accumulates transactions given as path lists.
#[derive(Debug, Default)]
pub struct DatabaseBuilder {
    interner: Interner,
    transactions: Vec<Transaction>,
}

impl DatabaseBuilder {
    pub fn push<S: AsRef<str>>(&mut self, id: impl Into<String>, timestamp: Timestamp, paths: &[S]) -> &mut Self {
        let items = paths.iter().map(|p| self.interner.intern(p.as_ref())).collect();
        self.transactions.push(Transaction::new(id, timestamp, items));
        self
    }

    pub fn interner_mut(&mut self) -> &mut Interner {
        &mut self.interner
    }

    pub fn build(self) -> TransactionDatabase {
        TransactionDatabase::new(Arc::new(self.interner), self.transactions)
            .expect("builder interns every item it stores")
    }
}

/// Sorted list of transaction indices.
pub type Tidset = Vec<u32>;

/// Per-item tidsets of a horizontal database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalDatabase {
    tidsets: Vec<Tidset>,
    transactions: usize,
}

impl VerticalDatabase {
    pub fn tidset(&self, item: ItemId) -> &[u32] {
        self.tidsets.get(item.index()).map_or(&[], Vec::as_slice)
    }

    pub fn tidsets(&self) -> &[Tidset] {
        &self.tidsets
    }

    pub fn universe(&self) -> usize {
        self.tidsets.len()
    }

    pub fn transactions(&self) -> usize {
        self.transactions
    }

    /// Transposes back to per-transaction item lists.
    pub fn to_horizontal(&self) -> Vec<Vec<ItemId>> {
        let mut rows = alloc::vec![Vec::new(); self.transactions];
        for (item, tids) in self.tidsets.iter().enumerate() {
            for &t in tids {
                rows[t as usize].push(ItemId(item as u32));
            }
        }
        rows
    }
}

/// Single pass over `db`; tidsets come out ascending because transactions are
/// visited in index order.
pub fn to_vertical(db: &TransactionDatabase) -> VerticalDatabase {
    let mut tidsets = alloc::vec![Vec::new(); db.universe()];
    for (tid, t) in db.transactions().iter().enumerate() {
        for &item in t.items() {
            tidsets[item.index()].push(tid as u32);
        }
    }
    VerticalDatabase { tidsets, transactions: db.len() }
}

/// Intersection of two ascending tidsets.
pub fn tidset_intersect(a: &[u32], b: &[u32]) -> Tidset {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn interning_is_first_seen_and_idempotent() {
        let (interner, ids) = intern_paths(&["a.java", "b.java", "a.java"]);
        assert_eq!(ids, vec![ItemId(0), ItemId(1), ItemId(0)]);
        assert_eq!(interner.len(), 2);
        assert_eq!(interner.resolve(ItemId(1)), "b.java");
    }

    #[test]
    fn interning_nothing() {
        let (interner, ids) = intern_paths::<&str>(&[]);
        assert!(interner.is_empty());
        assert!(ids.is_empty());
    }

    #[test]
    fn thousand_paths_round_trip() {
        let paths: Vec<String> = (0..1000).map(|i| format!("src/F{i}.java")).collect();
        let (interner, ids) = intern_paths(&paths);
        assert_eq!(ids, (0..1000).map(ItemId).collect::<Vec<_>>());
        for (p, id) in paths.iter().zip(&ids) {
            assert_eq!(interner.resolve(*id), p);
            assert_eq!(interner.get(p), Some(*id));
        }
    }

    #[test]
    fn transactions_sorted_and_deduplicated() {
        let t = Transaction::new("c", Timestamp(0), vec![ItemId(3), ItemId(1), ItemId(3)]);
        assert_eq!(t.items(), &[ItemId(1), ItemId(3)]);
    }

    #[test]
    fn database_orders_by_time_then_id() {
        let mut b = TransactionDatabase::builder();
        b.push("b", Timestamp(5), &["x"]);
        b.push("a", Timestamp(5), &["y"]);
        b.push("z", Timestamp(1), &["x"]);
        let db = b.build();
        let ids: Vec<&str> = db.transactions().iter().map(Transaction::id).collect();
        assert_eq!(ids, ["z", "a", "b"]);
    }

    #[test]
    fn out_of_universe_rejected() {
        let err = TransactionDatabase::new(
            Arc::new(Interner::new()),
            vec![Transaction::new("t", Timestamp(0), vec![ItemId(0)])],
        )
        .unwrap_err();
        assert!(matches!(err, DbError::ItemOutOfUniverse { universe: 0, .. }));
    }

    #[test]
    fn equality_ignores_numbering() {
        let mut a = TransactionDatabase::builder();
        a.push("1", Timestamp(0), &["p", "q"]);
        let mut b = TransactionDatabase::builder();
        b.interner_mut().intern("q");
        b.push("1", Timestamp(0), &["q", "p"]);
        assert_eq!(a.build(), b.build());
    }

    #[test]
    fn intersect_with_empty() {
        assert!(tidset_intersect(&[1, 2, 3], &[]).is_empty());
        assert_eq!(tidset_intersect(&[1, 3, 5, 7], &[0, 3, 7, 9]), vec![3, 7]);
    }

    #[test]
    fn vertical_of_empty_database() {
        let v = to_vertical(&TransactionDatabase::empty());
        assert_eq!(v.universe(), 0);
        assert_eq!(v.transactions(), 0);
    }

    #[test]
    fn subset_walk() {
        let h = [ItemId(1), ItemId(3), ItemId(5)];
        assert!(is_sorted_subset(&[ItemId(1), ItemId(5)], &h));
        assert!(is_sorted_subset(&[], &h));
        assert!(!is_sorted_subset(&[ItemId(2)], &h));
        assert!(!is_sorted_subset(&[ItemId(5), ItemId(6)], &h));
    }
}
