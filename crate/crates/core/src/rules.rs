//! Association rules and co-change recommendations.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::db::{Interner, ItemId};
use crate::itemset::{FrequentItemsetSet, Itemset};
use crate::miners::MiningParams;

/// `antecedent ⇒ consequent` with relative support and confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    /// support(antecedent ∪ consequent) / |D|
    pub support: f64,
    /// support(antecedent ∪ consequent) / support(antecedent)
    pub confidence: f64,
}

impl AssociationRule {
    /// The antecedent when it is a single item.
    pub fn single_antecedent(&self) -> Option<ItemId> {
        match self.antecedent.items() {
            [only] => Some(*only),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    /// A subset of a frequent itemset is missing, which no correct miner
    /// produces.
    #[error("antecedent {0:?} of a frequent itemset has no recorded support")]
    MissingSubset(Vec<ItemId>),
}

/// Emits `A ⇒ Z \ A` for every frequent `Z` with at least two items and every
/// non-empty proper subset `A`, keeping rules that reach the confidence
/// threshold. Rules are ordered by antecedent, then consequent.
pub fn generate_rules(fis: &FrequentItemsetSet, params: &MiningParams) -> Result<Vec<AssociationRule>, RuleError> {
    let total = fis.transactions() as f64;
    let mut rules = Vec::new();
    for (itemset, &count) in fis {
        let width = itemset.len();
        if width < 2 {
            continue;
        }
        assert!(width < 64, "itemset of {width} items is too wide to split into rules");
        let support = f64::from(count) / total;
        for mask in 1u64..(1u64 << width) - 1 {
            let in_antecedent = |i: usize| mask & (1 << i) != 0;
            let pick = |side: bool| -> Vec<ItemId> {
                itemset.iter().enumerate().filter(|&(i, _)| in_antecedent(i) == side).map(|(_, &x)| x).collect()
            };
            let antecedent = pick(true);
            let antecedent_count =
                fis.support_count(&antecedent).ok_or_else(|| RuleError::MissingSubset(antecedent.clone()))?;
            let confidence = f64::from(count) / f64::from(antecedent_count);
            if confidence >= params.min_confidence() {
                rules.push(AssociationRule {
                    antecedent: Itemset::new(antecedent),
                    consequent: Itemset::new(pick(false)),
                    support,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(|a, b| a.antecedent.cmp(&b.antecedent).then_with(|| a.consequent.cmp(&b.consequent)));
    Ok(rules)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecommendError {
    #[error("`{0}` never changed in the training history")]
    NotInTrainingSet(String),
}

/// One recommended file with the strongest rule that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RecommendedFile {
    pub path: String,
    pub confidence: f64,
    pub support: f64,
    /// Consequent of the rule the scores come from.
    pub via: Itemset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub query: String,
    /// Descending confidence, then descending support, then path.
    pub files: Vec<RecommendedFile>,
}

impl Recommendation {
    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|f| f.path.as_str())
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate<'r> {
    confidence: f64,
    support: f64,
    via: &'r Itemset,
}

impl Candidate<'_> {
    /// Higher confidence, then higher support, then smaller consequent wins.
    fn beats(&self, other: &Self) -> bool {
        self.confidence
            .total_cmp(&other.confidence)
            .then(self.support.total_cmp(&other.support))
            .then_with(|| other.via.cmp(self.via))
            == Ordering::Greater
    }
}

/// Answers "which files usually change with this one?" from rules whose
/// antecedent is exactly the queried file.
#[derive(Debug)]
pub struct Recommender<'a> {
    interner: &'a Interner,
    known: Vec<bool>,
    by_query: BTreeMap<ItemId, Vec<&'a AssociationRule>>,
}

impl<'a> Recommender<'a> {
    /// `known` lists the items seen in training; queries outside it are
    /// rejected rather than answered with an empty list.
    pub fn new(rules: &'a [AssociationRule], interner: &'a Interner, known: impl IntoIterator<Item = ItemId>) -> Self {
        let mut flags = alloc::vec![false; interner.len()];
        for id in known {
            if let Some(f) = flags.get_mut(id.index()) {
                *f = true;
            }
        }
        let mut by_query: BTreeMap<ItemId, Vec<&AssociationRule>> = BTreeMap::new();
        for rule in rules {
            if let Some(q) = rule.single_antecedent() {
                by_query.entry(q).or_default().push(rule);
            }
        }
        Self { interner, known: flags, by_query }
    }

    pub fn is_known(&self, path: &str) -> bool {
        self.interner.get(path).is_some_and(|id| self.known[id.index()])
    }

    pub fn recommend(&self, query: &str, limit: Option<usize>) -> Result<Recommendation, RecommendError> {
        let id = self
            .interner
            .get(query)
            .filter(|id| self.known[id.index()])
            .ok_or_else(|| RecommendError::NotInTrainingSet(String::from(query)))?;

        let mut best: BTreeMap<ItemId, Candidate<'_>> = BTreeMap::new();
        for rule in self.by_query.get(&id).into_iter().flatten() {
            let candidate = Candidate { confidence: rule.confidence, support: rule.support, via: &rule.consequent };
            for &file in rule.consequent.iter().filter(|&&f| f != id) {
                match best.get_mut(&file) {
                    Some(current) if !candidate.beats(current) => {}
                    Some(current) => *current = candidate,
                    None => {
                        best.insert(file, candidate);
                    }
                }
            }
        }

        let mut files: Vec<RecommendedFile> = best
            .into_iter()
            .map(|(file, c)| RecommendedFile {
                path: String::from(self.interner.resolve(file)),
                confidence: c.confidence,
                support: c.support,
                via: c.via.clone(),
            })
            .collect();
        files.sort_by(|a, b| {
            b.confidence
                .total_cmp(&a.confidence)
                .then(b.support.total_cmp(&a.support))
                .then_with(|| a.path.cmp(&b.path))
        });
        if let Some(limit) = limit {
            files.truncate(limit);
        }
        Ok(Recommendation { query: String::from(query), files })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::intern_paths;
    use alloc::vec;

    fn rule(a: &[u32], c: &[u32], support: f64, confidence: f64) -> AssociationRule {
        let set = |v: &[u32]| Itemset::new(v.iter().copied().map(ItemId).collect());
        AssociationRule { antecedent: set(a), consequent: set(c), support, confidence }
    }

    #[test]
    fn singleton_antecedents_only() {
        let (interner, _) = intern_paths(&["a", "b", "c", "d", "e"]);
        let rules = vec![
            rule(&[0], &[1], 0.3, 0.9),
            rule(&[0], &[2], 0.2, 0.6),
            rule(&[3], &[4], 0.2, 0.8),
            rule(&[0, 3], &[4], 0.2, 1.0),
        ];
        let r = Recommender::new(&rules, &interner, (0..5).map(ItemId));
        let rec = r.recommend("a", None).unwrap();
        assert_eq!(rec.paths().collect::<Vec<_>>(), ["b", "c"]);
        assert_eq!(r.recommend("a", Some(1)).unwrap().files.len(), 1);
    }

    #[test]
    fn no_matching_rule_is_empty_not_error() {
        let (interner, _) = intern_paths(&["a", "b"]);
        let rules = vec![rule(&[0], &[1], 0.5, 0.5)];
        let r = Recommender::new(&rules, &interner, [ItemId(0), ItemId(1)]);
        assert!(r.recommend("b", None).unwrap().files.is_empty());
    }

    #[test]
    fn unknown_query_rejected() {
        let (interner, _) = intern_paths(&["a", "b", "z"]);
        let rules = vec![rule(&[0], &[1], 0.5, 0.5)];
        let r = Recommender::new(&rules, &interner, [ItemId(0), ItemId(1)]);
        assert_eq!(r.recommend("zzz", None), Err(RecommendError::NotInTrainingSet("zzz".into())));
        assert_eq!(r.recommend("z", None), Err(RecommendError::NotInTrainingSet("z".into())));
    }

    #[test]
    fn duplicates_merge_keeping_best_and_ties_break_by_path() {
        let (interner, _) = intern_paths(&["q", "y", "x", "w"]);
        let rules = vec![rule(&[0], &[1], 0.1, 0.5), rule(&[0], &[1, 2], 0.2, 0.7), rule(&[0], &[3], 0.2, 0.7)];
        let r = Recommender::new(&rules, &interner, (0..4).map(ItemId));
        let rec = r.recommend("q", None).unwrap();
        assert_eq!(rec.paths().collect::<Vec<_>>(), ["w", "x", "y"]);
        assert_eq!(rec.files[2].confidence, 0.7);
    }
}
