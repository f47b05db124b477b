//! Scoring recommendations against held-out transactions.
//!
//! Every file of every test transaction is used as a query once; the other
//! files of that transaction are what a perfect recommender would return.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::db::TransactionDatabase;
use crate::miners::{Algorithm, MiningError, MiningParams};
use crate::rules::{generate_rules, AssociationRule, RecommendError, Recommender, RuleError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub txn_id: String,
    pub query: String,
    /// The transaction's other files, sorted.
    pub expected: Vec<String>,
}

/// One case per (transaction, file) pair, files in path order.
pub fn make_test_cases(test: &TransactionDatabase) -> Vec<TestCase> {
    let mut cases = Vec::new();
    for (index, t) in test.transactions().iter().enumerate() {
        let paths = test.paths_of(index);
        for (i, query) in paths.iter().enumerate() {
            let expected = paths.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.to_string()).collect();
            cases.push(TestCase { txn_id: t.id().to_string(), query: query.to_string(), expected });
        }
    }
    cases
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub recommended: usize,
    pub expected: usize,
    pub hits: usize,
}

impl QueryMetrics {
    /// Precision, recall and their harmonic mean from set sizes. F is 0 when
    /// both precision and recall are 0.
    pub fn from_counts(recommended: usize, expected: usize, hits: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(hits, recommended);
        let recall = ratio(hits, expected);
        let f_measure = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        Self { precision, recall, f_measure, recommended, expected, hits }
    }

    /// Scores the recommended set `a` against the expected set `b`. Both
    /// slices must be duplicate-free.
    pub fn score<S: AsRef<str>, T: AsRef<str>>(a: &[S], b: &[T]) -> Self {
        let hits = a.iter().filter(|x| b.iter().any(|y| y.as_ref() == x.as_ref())).count();
        Self::from_counts(a.len(), b.len(), hits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// The query file never occurs in the training transactions.
    UnknownQuery,
    /// No rule has the query as its antecedent.
    NoRecommendation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QueryOutcome {
    Scored(QueryMetrics),
    Skipped(SkipReason),
}

pub fn evaluate_query(recommender: &Recommender<'_>, case: &TestCase) -> QueryOutcome {
    match recommender.recommend(&case.query, None) {
        Err(RecommendError::NotInTrainingSet(_)) => QueryOutcome::Skipped(SkipReason::UnknownQuery),
        Ok(rec) if rec.files.is_empty() => QueryOutcome::Skipped(SkipReason::NoRecommendation),
        Ok(rec) => {
            let recommended: Vec<&str> = rec.paths().collect();
            QueryOutcome::Scored(QueryMetrics::score(&recommended, &case.expected))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("none of the {0} test queries received a recommendation")]
    NoEvaluableQueries(usize),
}

impl AggregateMetrics {
    /// Means over the scored outcomes; skipped ones are only counted.
    pub fn from_outcomes<'o>(outcomes: impl IntoIterator<Item = &'o QueryOutcome>) -> Result<Self, EvalError> {
        let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
        let (mut evaluated, mut skipped) = (0usize, 0usize);
        for outcome in outcomes {
            match outcome {
                QueryOutcome::Scored(m) => {
                    p += m.precision;
                    r += m.recall;
                    f += m.f_measure;
                    evaluated += 1;
                }
                QueryOutcome::Skipped(_) => skipped += 1,
            }
        }
        if evaluated == 0 {
            return Err(EvalError::NoEvaluableQueries(skipped));
        }
        let n = evaluated as f64;
        Ok(Self { precision: p / n, recall: r / n, f_measure: f / n, evaluated, skipped })
    }
}

/// Per-case outcomes, in case order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectEvaluation {
    pub cases: Vec<TestCase>,
    pub outcomes: Vec<QueryOutcome>,
}

impl ProjectEvaluation {
    pub fn aggregate(&self) -> Result<AggregateMetrics, EvalError> {
        AggregateMetrics::from_outcomes(&self.outcomes)
    }
}

/// Rules learned from `train`, queried with every case built from `test`.
pub fn evaluate_detailed(
    rules: &[AssociationRule],
    train: &TransactionDatabase,
    test: &TransactionDatabase,
) -> ProjectEvaluation {
    let recommender = Recommender::new(rules, train.interner(), train.present_items());
    let cases = make_test_cases(test);
    let outcomes = cases.iter().map(|c| evaluate_query(&recommender, c)).collect();
    ProjectEvaluation { cases, outcomes }
}

pub fn evaluate_project(
    rules: &[AssociationRule],
    train: &TransactionDatabase,
    test: &TransactionDatabase,
) -> Result<AggregateMetrics, EvalError> {
    evaluate_detailed(rules, train, test).aggregate()
}

/// Mines `train` and derives rules, the unit the timing harness measures.
pub fn mine_rules(
    algorithm: Algorithm,
    train: &TransactionDatabase,
    params: &MiningParams,
) -> Result<Vec<AssociationRule>, RuleError> {
    generate_rules(&algorithm.mine(train, params), params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub min_support: f64,
    pub min_confidence: f64,
    pub rules: usize,
    /// `Err` carries the reason a cell produced no metrics.
    pub metrics: Result<AggregateMetrics, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub algorithm: Algorithm,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("the {0} grid is empty")]
    EmptyGrid(&'static str),
    #[error("the {0} grid must be strictly increasing")]
    UnorderedGrid(&'static str),
    #[error(transparent)]
    Params(#[from] MiningError),
    #[error(transparent)]
    Rules(#[from] RuleError),
}

/// Checks both axes are non-empty, strictly increasing and valid thresholds.
pub fn validate_grid(supports: &[f64], confidences: &[f64]) -> Result<(), SweepError> {
    for (name, axis) in [("support", supports), ("confidence", confidences)] {
        if axis.is_empty() {
            return Err(SweepError::EmptyGrid(name));
        }
        if axis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SweepError::UnorderedGrid(name));
        }
    }
    for &s in supports {
        for &c in confidences {
            MiningParams::new(s, c)?;
        }
    }
    Ok(())
}

/// All rows for one support level: mines once, then derives and scores the
/// rules for each confidence.
pub fn sweep_support(
    algorithm: Algorithm,
    train: &TransactionDatabase,
    test: &TransactionDatabase,
    min_support: f64,
    confidences: &[f64],
) -> Result<Vec<SweepRow>, SweepError> {
    let base = MiningParams::new(min_support, confidences[0])?;
    let fis = algorithm.mine(train, &base);
    let mut rows = Vec::with_capacity(confidences.len());
    for &c in confidences {
        let params = MiningParams::new(min_support, c)?;
        let rules = generate_rules(&fis, &params)?;
        let metrics = evaluate_project(&rules, train, test).map_err(|e| e.to_string());
        rows.push(SweepRow { min_support, min_confidence: c, rules: rules.len(), metrics });
    }
    Ok(rows)
}

/// Cartesian sweep, rows ordered by support then confidence.
pub fn sweep(
    train: &TransactionDatabase,
    test: &TransactionDatabase,
    algorithm: Algorithm,
    supports: &[f64],
    confidences: &[f64],
) -> Result<SweepGrid, SweepError> {
    validate_grid(supports, confidences)?;
    let mut rows = Vec::with_capacity(supports.len() * confidences.len());
    for &s in supports {
        rows.extend(sweep_support(algorithm, train, test, s, confidences)?);
    }
    Ok(SweepGrid { algorithm, rows })
}
