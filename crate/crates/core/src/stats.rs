//! Paired comparison of the miners: Wilcoxon signed-rank test, Holm's
//! step-down adjustment and Cliff's delta.

use alloc::vec::Vec;
use core::fmt;

use crate::miners::Algorithm;

/// Significance level for adjusted p-values.
pub const ALPHA: f64 = 0.05;

/// Largest number of non-zero differences for which the null distribution is
/// computed exactly; larger samples use the normal approximation.
pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("paired samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("sample is empty")]
    Empty,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    Exact,
    Normal,
    /// Every difference was zero; nothing to test.
    AllZeroDifferences,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Two-sided.
    pub p_value: f64,
    /// Number of non-zero differences.
    pub n: usize,
    /// Sum of the ranks of the positive differences `x - y`.
    pub w_plus: f64,
    pub method: WilcoxonMethod,
}

impl WilcoxonResult {
    pub fn all_zero(&self) -> bool {
        self.method == WilcoxonMethod::AllZeroDifferences
    }
}

fn check_finite(xs: &[f64]) -> Result<(), StatsError> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

/// Non-zero differences `x - y` with their ranks by absolute value, ties
/// sharing the average rank. Ranks are returned doubled so they stay
/// integral: `2 * rank`.
fn signed_doubled_ranks(x: &[f64], y: &[f64]) -> Vec<(bool, u64)> {
    let mut diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    diffs.sort_by(|a, b| libm::fabs(*a).total_cmp(&libm::fabs(*b)));
    let mut out = Vec::with_capacity(diffs.len());
    let mut i = 0;
    while i < diffs.len() {
        let mut j = i;
        while j + 1 < diffs.len() && libm::fabs(diffs[j + 1]) == libm::fabs(diffs[i]) {
            j += 1;
        }
        // positions i..=j (0-based) share rank ((i+1) + (j+1)) / 2
        let doubled = (i + 1 + j + 1) as u64;
        out.extend(diffs[i..=j].iter().map(|d| (*d > 0.0, doubled)));
        i = j + 1;
    }
    out
}

/// Two-sided Wilcoxon signed-rank test of `x` against `y`.
///
/// Zero differences are dropped. With at most [`EXACT_MAX_N`] remaining
/// differences the p-value comes from the exact permutation distribution of
/// the signed ranks (ties included); otherwise from the normal approximation
/// with tie and continuity corrections.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<WilcoxonResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(StatsError::Empty);
    }
    check_finite(x)?;
    check_finite(y)?;

    let ranks = signed_doubled_ranks(x, y);
    let n = ranks.len();
    if n == 0 {
        return Ok(WilcoxonResult { p_value: 1.0, n: 0, w_plus: 0.0, method: WilcoxonMethod::AllZeroDifferences });
    }
    let w_plus_doubled: u64 = ranks.iter().filter(|(pos, _)| *pos).map(|(_, r)| r).sum();
    let w_plus = w_plus_doubled as f64 / 2.0;

    if n <= EXACT_MAX_N {
        let doubled: Vec<u64> = ranks.iter().map(|&(_, r)| r).collect();
        Ok(WilcoxonResult {
            p_value: exact_p_value(&doubled, w_plus_doubled),
            n,
            w_plus,
            method: WilcoxonMethod::Exact,
        })
    } else {
        let doubled: Vec<u64> = ranks.iter().map(|&(_, r)| r).collect();
        Ok(WilcoxonResult { p_value: normal_p_value(&doubled, w_plus), n, w_plus, method: WilcoxonMethod::Normal })
    }
}

/// Exact two-sided p-value: under the null every sign assignment of the
/// ranks is equally likely. Counts assignments whose positive rank sum is at
/// least as extreme as the observed one, in either tail.
pub fn exact_p_value(doubled_ranks: &[u64], observed_doubled: u64) -> f64 {
    let total: u64 = doubled_ranks.iter().sum();
    // ways[s]: number of sign assignments with doubled positive sum s
    let mut ways = alloc::vec![0u64; total as usize + 1];
    ways[0] = 1;
    let mut reach = 0usize;
    for &r in doubled_ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if ways[s] != 0 {
                ways[s + r] += ways[s];
            }
        }
        reach += r;
    }
    let lower: u64 = ways[..=observed_doubled as usize].iter().sum();
    let upper: u64 = ways[observed_doubled as usize..].iter().sum();
    let assignments = (1u64 << doubled_ranks.len()) as f64;
    let p = (2 * lower.min(upper)) as f64 / assignments;
    p.min(1.0)
}

/// Normal approximation with tie correction and a 0.5 continuity correction.
pub fn normal_p_value(doubled_ranks: &[u64], w_plus: f64) -> f64 {
    let n = doubled_ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < doubled_ranks.len() {
        let mut j = i;
        while j < doubled_ranks.len() && doubled_ranks[j] == doubled_ranks[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if variance <= 0.0 {
        return 1.0;
    }
    let z = (libm::fabs(w_plus - mean) - 0.5) / libm::sqrt(variance);
    if z <= 0.0 {
        return 1.0;
    }
    libm::erfc(z / core::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Normal-approximation variant of [`wilcoxon_signed_rank`] regardless of n.
pub fn wilcoxon_normal(x: &[f64], y: &[f64]) -> Result<WilcoxonResult, StatsError> {
    let exact = wilcoxon_signed_rank(x, y)?;
    if exact.all_zero() {
        return Ok(exact);
    }
    let doubled: Vec<u64> = signed_doubled_ranks(x, y).iter().map(|&(_, r)| r).collect();
    Ok(WilcoxonResult { p_value: normal_p_value(&doubled, exact.w_plus), method: WilcoxonMethod::Normal, ..exact })
}

/// Holm's step-down adjustment, returned in input order.
///
/// The i-th smallest p-value (1-based) is multiplied by `n - i + 1`, a
/// running maximum keeps the sequence monotone, and values are capped at 1.
pub fn holm_adjust(p_values: &[f64]) -> Vec<f64> {
    let n = p_values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = alloc::vec![0.0; n];
    let mut running = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        let scaled = (p_values[idx] * (n - rank) as f64).min(1.0);
        running = running.max(scaled);
        adjusted[idx] = running;
    }
    adjusted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Magnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl Magnitude {
    pub const SMALL: f64 = 0.147;
    pub const MEDIUM: f64 = 0.33;
    pub const LARGE: f64 = 0.474;

    /// Lower bounds are inclusive: exactly 0.147 is small.
    pub fn of(d: f64) -> Self {
        let d = libm::fabs(d);
        if d >= Self::LARGE {
            Magnitude::Large
        } else if d >= Self::MEDIUM {
            Magnitude::Medium
        } else if d >= Self::SMALL {
            Magnitude::Small
        } else {
            Magnitude::Negligible
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Magnitude::Negligible => "negligible",
            Magnitude::Small => "small",
            Magnitude::Medium => "medium",
            Magnitude::Large => "large",
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectSize {
    pub d: f64,
    pub magnitude: Magnitude,
}

/// Cliff's delta: P(x > y) - P(x < y) over all cross pairs.
pub fn cliffs_delta(x: &[f64], y: &[f64]) -> Result<EffectSize, StatsError> {
    if x.is_empty() || y.is_empty() {
        return Err(StatsError::Empty);
    }
    check_finite(x)?;
    check_finite(y)?;
    let mut dominance: i64 = 0;
    for a in x {
        for b in y {
            dominance += match a.partial_cmp(b) {
                Some(core::cmp::Ordering::Greater) => 1,
                Some(core::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    let d = dominance as f64 / (x.len() * y.len()) as f64;
    Ok(EffectSize { d, magnitude: Magnitude::of(d) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Precision,
    Recall,
    FMeasure,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Precision, Metric::Recall, Metric::FMeasure];

    pub fn key(self) -> &'static str {
        match self {
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::FMeasure => "f_measure",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Precision => "Precision",
            Metric::Recall => "Recall",
            Metric::FMeasure => "F-measure",
        }
    }
}

/// One algorithm's metric values over a shared list of configurations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricSeries {
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f_measure: Vec<f64>,
}

impl MetricSeries {
    pub fn get(&self, metric: Metric) -> &[f64] {
        match metric {
            Metric::Precision => &self.precision,
            Metric::Recall => &self.recall,
            Metric::FMeasure => &self.f_measure,
        }
    }

    pub fn push(&mut self, precision: f64, recall: f64, f_measure: f64) {
        self.precision.push(precision);
        self.recall.push(recall);
        self.f_measure.push(f_measure);
    }

    pub fn len(&self) -> usize {
        self.precision.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precision.is_empty()
    }
}

/// Pair order and orientation of the comparison table; each pair reads
/// "first - second".
pub const PAIRS: [(Algorithm, Algorithm); 6] = [
    (Algorithm::Apriori, Algorithm::FpGrowth),
    (Algorithm::Relim, Algorithm::FpGrowth),
    (Algorithm::Relim, Algorithm::Apriori),
    (Algorithm::Apriori, Algorithm::Eclat),
    (Algorithm::Relim, Algorithm::Eclat),
    (Algorithm::FpGrowth, Algorithm::Eclat),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub pair: (Algorithm, Algorithm),
    pub metric: Metric,
    pub n: usize,
    pub p_raw: f64,
    pub p_holm: f64,
    pub significant: bool,
    pub effect: EffectSize,
    pub method: WilcoxonMethod,
}

/// Rows ordered metric-major (precision, recall, F), pairs in [`PAIRS`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn get(&self, pair: (Algorithm, Algorithm), metric: Metric) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.pair == pair && r.metric == metric)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompareError {
    #[error("no metric values for {0}")]
    MissingAlgorithm(Algorithm),
    #[error("{algorithm} has {found} configurations, expected {expected}")]
    MisalignedSamples { algorithm: Algorithm, expected: usize, found: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Wilcoxon + Holm + Cliff's delta for the six algorithm pairs on each
/// metric. Holm adjustment runs within each metric's six tests.
pub fn compare_algorithms(series: &[(Algorithm, MetricSeries)]) -> Result<ComparisonReport, CompareError> {
    let lookup = |a: Algorithm| {
        series.iter().find(|(alg, _)| *alg == a).map(|(_, s)| s).ok_or(CompareError::MissingAlgorithm(a))
    };
    let expected = lookup(Algorithm::Apriori)?.len();
    for a in Algorithm::ALL {
        let s = lookup(a)?;
        for m in Metric::ALL {
            if s.get(m).len() != expected {
                return Err(CompareError::MisalignedSamples { algorithm: a, expected, found: s.get(m).len() });
            }
        }
    }

    let mut rows = Vec::with_capacity(PAIRS.len() * Metric::ALL.len());
    for metric in Metric::ALL {
        let mut family = Vec::with_capacity(PAIRS.len());
        for pair in PAIRS {
            let x = lookup(pair.0)?.get(metric);
            let y = lookup(pair.1)?.get(metric);
            let test = wilcoxon_signed_rank(x, y)?;
            let effect = cliffs_delta(x, y)?;
            family.push(ComparisonRow {
                pair,
                metric,
                n: test.n,
                p_raw: test.p_value,
                p_holm: test.p_value,
                significant: false,
                effect,
                method: test.method,
            });
        }
        let raw: Vec<f64> = family.iter().map(|r| r.p_raw).collect();
        for (row, adjusted) in family.iter_mut().zip(holm_adjust(&raw)) {
            row.p_holm = adjusted;
            row.significant = adjusted < ALPHA;
        }
        rows.extend(family);
    }
    Ok(ComparisonReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_shift_of_five() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.p_value, 0.0625);
        assert_eq!(r.n, 5);
        assert_eq!(r.w_plus, 0.0);
        assert_eq!(r.method, WilcoxonMethod::Exact);
    }

    #[test]
    fn identical_samples_flagged() {
        let r = wilcoxon_signed_rank(&[0.3, 0.4], &[0.3, 0.4]).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert!(r.all_zero());
    }

    #[test]
    fn input_errors() {
        assert_eq!(wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]), Err(StatsError::LengthMismatch(1, 2)));
        assert_eq!(wilcoxon_signed_rank(&[], &[]), Err(StatsError::Empty));
        assert_eq!(wilcoxon_signed_rank(&[f64::NAN], &[1.0]), Err(StatsError::NonFinite));
        assert_eq!(cliffs_delta(&[], &[1.0]), Err(StatsError::Empty));
    }

    #[test]
    fn tied_ranks_are_averaged() {
        // |d| = 1, 1, 2 -> ranks 1.5, 1.5, 3
        let r = signed_doubled_ranks(&[1.0, 0.0, 5.0], &[0.0, 1.0, 3.0]);
        assert_eq!(r, vec![(true, 3), (false, 3), (true, 6)]);
    }

    #[test]
    fn large_samples_use_normal_approximation() {
        let x: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..30).map(|i| i as f64 + if i % 3 == 0 { -0.5 } else { 1.0 }).collect();
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.method, WilcoxonMethod::Normal);
        assert!(r.p_value > 0.0 && r.p_value < 0.05);
    }

    #[test]
    fn holm_examples() {
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&holm_adjust(&[0.01, 0.02, 0.2]), &[0.03, 0.04, 0.2]));
        assert_eq!(holm_adjust(&[0.5]), vec![0.5]);
        assert!(close(&holm_adjust(&[0.04, 0.04, 0.04]), &[0.12, 0.12, 0.12]));
        assert_eq!(holm_adjust(&[0.9, 0.6]), vec![1.0, 1.0]);
        assert!(holm_adjust(&[]).is_empty());
    }

    #[test]
    fn cliffs_delta_examples() {
        let e = cliffs_delta(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((e.d, e.magnitude), (1.0, Magnitude::Large));
        let e = cliffs_delta(&[1.0, 2.0, 2.0], &[2.0, 1.0, 2.0]).unwrap();
        assert_eq!((e.d, e.magnitude), (0.0, Magnitude::Negligible));
        let e = cliffs_delta(&[2.0], &[1.0, 3.0]).unwrap();
        assert_eq!((e.d, e.magnitude), (0.0, Magnitude::Negligible));
    }

    #[test]
    fn magnitude_boundaries() {
        assert_eq!(Magnitude::of(0.146_999), Magnitude::Negligible);
        assert_eq!(Magnitude::of(0.147), Magnitude::Small);
        assert_eq!(Magnitude::of(-0.33), Magnitude::Medium);
        assert_eq!(Magnitude::of(0.473_999), Magnitude::Medium);
        assert_eq!(Magnitude::of(0.474), Magnitude::Large);
        assert_eq!(Magnitude::of(-1.0), Magnitude::Large);
    }
}
