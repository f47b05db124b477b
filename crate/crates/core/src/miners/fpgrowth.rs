use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::db::{ItemId, TransactionDatabase};
use crate::itemset::{FrequentItemsetSet, Itemset};

const ROOT: usize = 0;

#[derive(Debug, Clone)]
struct Node {
    item: ItemId,
    count: u32,
    parent: usize,
    children: Vec<usize>,
    /// Next node carrying the same item.
    next: Option<usize>,
}

/// Header-table row: one per frequent item, in tree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderEntry {
    pub item: ItemId,
    pub support: u32,
    head: Option<usize>,
    tail: Option<usize>,
}

/// Prefix tree over the frequent items of a (conditional) database.
///
/// Items along every path are ordered by descending support, ties by
/// ascending id. The header table links all nodes of one item.
#[derive(Debug, Clone)]
pub struct FpTree {
    nodes: Vec<Node>,
    header: Vec<HeaderEntry>,
    rank: BTreeMap<ItemId, usize>,
}

impl FpTree {
    pub fn from_database(db: &TransactionDatabase, min_count: u32) -> Self {
        Self::build(db.transactions().iter().map(|t| (t.items(), 1)), min_count)
    }

    /// Builds a tree from weighted item lists (a transaction database or a
    /// conditional pattern base). Infrequent items are dropped.
    pub fn build<'a, I>(paths: I, min_count: u32) -> Self
    where
        I: Iterator<Item = (&'a [ItemId], u32)> + Clone,
    {
        let mut supports: BTreeMap<ItemId, u32> = BTreeMap::new();
        for (items, weight) in paths.clone() {
            for &item in items {
                *supports.entry(item).or_insert(0) += weight;
            }
        }
        let mut frequent: Vec<(ItemId, u32)> = supports.into_iter().filter(|&(_, s)| s >= min_count && s > 0).collect();
        frequent.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let rank: BTreeMap<ItemId, usize> = frequent.iter().enumerate().map(|(r, &(i, _))| (i, r)).collect();
        let header =
            frequent.iter().map(|&(item, support)| HeaderEntry { item, support, head: None, tail: None }).collect();
        let root = Node { item: ItemId(u32::MAX), count: 0, parent: ROOT, children: Vec::new(), next: None };
        let mut tree = FpTree { nodes: alloc::vec![root], header, rank };

        let mut ordered: Vec<(usize, ItemId)> = Vec::new();
        for (items, weight) in paths {
            ordered.clear();
            ordered.extend(items.iter().filter_map(|i| tree.rank.get(i).map(|&r| (r, *i))));
            ordered.sort_unstable();
            tree.insert(ordered.iter().map(|&(r, i)| (r, i)), weight);
        }
        tree
    }

    fn insert(&mut self, path: impl Iterator<Item = (usize, ItemId)>, weight: u32) {
        let mut at = ROOT;
        for (rank, item) in path {
            let existing = self.nodes[at].children.iter().copied().find(|&c| self.nodes[c].item == item);
            at = match existing {
                Some(child) => {
                    self.nodes[child].count += weight;
                    child
                }
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(Node { item, count: weight, parent: at, children: Vec::new(), next: None });
                    self.nodes[at].children.push(id);
                    let entry = &mut self.header[rank];
                    match entry.tail {
                        Some(tail) => self.nodes[tail].next = Some(id),
                        None => entry.head = Some(id),
                    }
                    entry.tail = Some(id);
                    id
                }
            };
        }
    }

    pub fn header(&self) -> &[HeaderEntry] {
        &self.header
    }

    pub fn is_empty(&self) -> bool {
        self.header.is_empty()
    }

    /// Number of item nodes (the root excluded).
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Counts of the nodes on `item`'s header chain, in link order.
    pub fn chain_counts(&self, item: ItemId) -> Vec<u32> {
        let Some(&rank) = self.rank.get(&item) else {
            return Vec::new();
        };
        self.chain(self.header[rank].head).map(|n| self.nodes[n].count).collect()
    }

    fn chain(&self, head: Option<usize>) -> impl Iterator<Item = usize> + '_ {
        core::iter::successors(head, move |&n| self.nodes[n].next)
    }

    /// Items from the root down to `node`, excluding the root.
    fn path_to(&self, node: usize) -> Vec<ItemId> {
        let mut path = Vec::new();
        let mut at = node;
        while at != ROOT {
            path.push(self.nodes[at].item);
            at = self.nodes[at].parent;
        }
        path.reverse();
        path
    }

    /// Every root-to-node path with the count of its last node.
    pub fn root_paths(&self) -> Vec<(Vec<ItemId>, u32)> {
        (1..self.nodes.len()).map(|n| (self.path_to(n), self.nodes[n].count)).collect()
    }

    /// Prefix paths (excluding the item itself) and counts of every node of
    /// `item`: its conditional pattern base.
    pub fn conditional_pattern_base(&self, item: ItemId) -> Vec<(Vec<ItemId>, u32)> {
        let Some(&rank) = self.rank.get(&item) else {
            return Vec::new();
        };
        self.chain(self.header[rank].head)
            .map(|n| (self.path_to(self.nodes[n].parent), self.nodes[n].count))
            .filter(|(path, _)| !path.is_empty())
            .collect()
    }
}

/// FP-Growth: build the tree once, then for each header item from the least
/// frequent upwards emit `suffix ∪ {item}` and recurse into the conditional
/// tree of its prefix paths.
pub fn fpgrowth(db: &TransactionDatabase, min_count: u32) -> FrequentItemsetSet {
    let mut out = FrequentItemsetSet::new(db.len());
    let tree = FpTree::from_database(db, min_count);
    let mut suffix = Vec::new();
    grow(&tree, &mut suffix, min_count, &mut out);
    out
}

fn grow(tree: &FpTree, suffix: &mut Vec<ItemId>, min_count: u32, out: &mut FrequentItemsetSet) {
    for entry in tree.header.iter().rev() {
        suffix.push(entry.item);
        out.insert(Itemset::new(suffix.clone()), entry.support);

        let base = tree.conditional_pattern_base(entry.item);
        if !base.is_empty() {
            let conditional = FpTree::build(base.iter().map(|(p, c)| (p.as_slice(), *c)), min_count);
            if !conditional.is_empty() {
                grow(&conditional, suffix, min_count, out);
            }
        }
        suffix.pop();
    }
}
