//! CSV and Markdown outputs. Every float is written with six fractional
//! digits; every file is UTF-8 with LF line endings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use cochange_core::eval::{ProjectEvaluation, QueryOutcome, SweepGrid};
use cochange_core::prep::SplitResult;
use cochange_core::stats::{ComparisonReport, Metric, MetricSeries, PAIRS};
use cochange_core::{Algorithm, AssociationRule, FrequentItemsetSet, Interner, ItemId, Itemset};

use crate::error::{Error, Result};
use crate::format::{fixed6, iso8601};
use crate::timing::TimingResult;

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::io("<output>", e))
}

fn render_itemset(set: &[ItemId], interner: &Interner) -> String {
    let mut paths: Vec<&str> = set.iter().map(|&i| interner.resolve(i)).collect();
    paths.sort_unstable();
    paths.join("|")
}

/// `rules.csv`: `antecedent,consequent,support,confidence`. Rows are sorted
/// by their rendered antecedent and consequent so the file does not depend
/// on how paths happened to be numbered.
pub fn write_rules_to<W: Write>(rules: &[AssociationRule], interner: &Interner, out: W) -> Result<()> {
    let mut rows: Vec<[String; 4]> = rules
        .iter()
        .map(|r| {
            [
                render_itemset(&r.antecedent, interner),
                render_itemset(&r.consequent, interner),
                fixed6(r.support),
                fixed6(r.confidence),
            ]
        })
        .collect();
    rows.sort();
    let mut w = csv_writer(out);
    w.write_record(["antecedent", "consequent", "support", "confidence"])?;
    for row in &rows {
        w.write_record(row)?;
    }
    finish(w)
}

/// Rules read back from `rules.csv` with their own path interner.
#[derive(Debug, Clone)]
pub struct RuleFile {
    pub interner: Interner,
    pub rules: Vec<AssociationRule>,
}

pub fn read_rules_from<R: Read>(input: R, origin: &Path) -> Result<RuleFile> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers != vec!["antecedent", "consequent", "support", "confidence"] {
        return Err(Error::format(origin, 1, "expected header antecedent,consequent,support,confidence"));
    }
    let mut interner = Interner::new();
    let mut rules = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::format(origin, line, e.to_string()))?;
        let mut itemset = |field: &str| {
            let items: Vec<ItemId> = field.split('|').filter(|p| !p.is_empty()).map(|p| interner.intern(p)).collect();
            (!items.is_empty()).then(|| Itemset::new(items))
        };
        let antecedent = itemset(&record[0]).ok_or_else(|| Error::format(origin, line, "empty antecedent"))?;
        let consequent = itemset(&record[1]).ok_or_else(|| Error::format(origin, line, "empty consequent"))?;
        let number = |field: &str| {
            field
                .parse::<f64>()
                .ok()
                .filter(|x| (0.0..=1.0).contains(x))
                .ok_or_else(|| Error::format(origin, line, format!("`{field}` is not a fraction")))
        };
        rules.push(AssociationRule {
            antecedent,
            consequent,
            support: number(&record[2])?,
            confidence: number(&record[3])?,
        });
    }
    Ok(RuleFile { interner, rules })
}

pub fn read_rules(path: &Path) -> Result<RuleFile> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_rules_from(file, path)
}

/// `itemset,support_count,support`, in the set's size-then-item order
/// rendered through `interner`.
pub fn write_itemsets_to<W: Write>(fis: &FrequentItemsetSet, interner: &Interner, out: W) -> Result<()> {
    let total = fis.transactions() as f64;
    let mut rows: Vec<(usize, String, u32)> =
        fis.iter().map(|(s, &c)| (s.len(), render_itemset(s, interner), c)).collect();
    rows.sort();
    let mut w = csv_writer(out);
    w.write_record(["itemset", "support_count", "support"])?;
    for (_, set, count) in rows {
        w.write_record([set, count.to_string(), fixed6(f64::from(count) / total)])?;
    }
    finish(w)
}

/// One `metrics.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub algorithm: Algorithm,
    pub min_support: f64,
    pub min_confidence: f64,
    pub metrics: std::result::Result<cochange_core::eval::AggregateMetrics, String>,
}

pub const METRICS_HEADER: [&str; 8] =
    ["algorithm", "min_support", "min_confidence", "precision", "recall", "f_measure", "evaluated", "skipped"];

fn metrics_fields(row: &MetricsRow) -> Vec<String> {
    let mut fields = vec![row.algorithm.key().to_string(), fixed6(row.min_support), fixed6(row.min_confidence)];
    match &row.metrics {
        Ok(m) => fields.extend([
            fixed6(m.precision),
            fixed6(m.recall),
            fixed6(m.f_measure),
            m.evaluated.to_string(),
            m.skipped.to_string(),
        ]),
        Err(_) => fields.extend(std::iter::repeat_n(String::new(), 5)),
    }
    fields
}

/// `metrics.csv`. Rows without metrics leave the metric columns empty.
pub fn write_metrics_to<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(METRICS_HEADER)?;
    for row in rows {
        w.write_record(metrics_fields(row))?;
    }
    finish(w)
}

/// Sweep output: the `metrics.csv` columns plus the number of rules and the
/// reason a cell has no metrics.
pub fn write_sweep_to<W: Write>(grids: &[SweepGrid], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let mut header: Vec<&str> = METRICS_HEADER.to_vec();
    header.extend(["rules", "reason"]);
    w.write_record(&header)?;
    for grid in grids {
        for cell in &grid.rows {
            let row = MetricsRow {
                algorithm: grid.algorithm,
                min_support: cell.min_support,
                min_confidence: cell.min_confidence,
                metrics: cell.metrics.clone(),
            };
            let mut fields = metrics_fields(&row);
            fields.push(cell.rules.to_string());
            fields.push(cell.metrics.as_ref().err().cloned().unwrap_or_default());
            w.write_record(&fields)?;
        }
    }
    finish(w)
}

/// Per-query CSV, scored queries only: `txn_id,query,P,R,F,a_size,b_size,hit`.
pub fn write_queries_to<W: Write>(evaluation: &ProjectEvaluation, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["txn_id", "query", "P", "R", "F", "a_size", "b_size", "hit"])?;
    for (case, outcome) in evaluation.cases.iter().zip(&evaluation.outcomes) {
        if let QueryOutcome::Scored(m) = outcome {
            w.write_record([
                case.txn_id.clone(),
                case.query.clone(),
                fixed6(m.precision),
                fixed6(m.recall),
                fixed6(m.f_measure),
                m.recommended.to_string(),
                m.expected.to_string(),
                m.hits.to_string(),
            ])?;
        }
    }
    finish(w)
}

/// `timing.csv`: `algorithm,seconds,transactions,min_support,min_confidence`.
pub fn write_timing_to<W: Write>(results: &[TimingResult], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["algorithm", "seconds", "transactions", "min_support", "min_confidence"])?;
    for r in results {
        w.write_record([
            r.algorithm.key().to_string(),
            fixed6(r.seconds),
            r.transactions.to_string(),
            fixed6(r.params.min_support()),
            fixed6(r.params.min_confidence()),
        ])?;
    }
    finish(w)
}

/// `total,after_filtering,train,test,period_start,period_end`.
pub fn write_split_summary_to<W: Write>(split: &SplitResult, out: W) -> Result<()> {
    let c = &split.counts;
    let mut w = csv_writer(out);
    w.write_record(["total", "after_filtering", "train", "test", "period_start", "period_end"])?;
    w.write_record([
        c.total.to_string(),
        c.after_filtering.to_string(),
        c.train.to_string(),
        c.test.to_string(),
        iso8601(split.evaluation_period.0),
        iso8601(split.evaluation_period.1),
    ])?;
    finish(w)
}

pub fn pair_label(pair: (Algorithm, Algorithm)) -> String {
    format!("{} - {}", pair.0.label(), pair.1.label())
}

/// `compare.csv`: `pair,metric,p_raw,p_holm,cliffs_delta,magnitude,significant`.
pub fn write_compare_to<W: Write>(report: &ComparisonReport, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["pair", "metric", "p_raw", "p_holm", "cliffs_delta", "magnitude", "significant"])?;
    for row in &report.rows {
        w.write_record([
            pair_label(row.pair),
            row.metric.key().to_string(),
            fixed6(row.p_raw),
            fixed6(row.p_holm),
            fixed6(row.effect.d),
            row.effect.magnitude.as_str().to_string(),
            row.significant.to_string(),
        ])?;
    }
    finish(w)
}

/// One row per pair, a p-value and a Cliff's delta column per metric.
pub fn compare_markdown(report: &ComparisonReport) -> String {
    let mut md = String::new();
    md.push_str("| Algorithm |");
    for m in Metric::ALL {
        let _ = write!(md, " {0} p-value | {0} Cliff's delta |", m.label());
    }
    md.push_str("\n|---|");
    md.push_str(&"---|---|".repeat(Metric::ALL.len()));
    md.push('\n');
    for pair in PAIRS {
        let _ = write!(md, "| {} |", pair_label(pair));
        for m in Metric::ALL {
            match report.get(pair, m) {
                Some(r) => {
                    let _ = write!(md, " {} | {} ({}) |", fixed6(r.p_holm), fixed6(r.effect.d), r.effect.magnitude);
                }
                None => md.push_str(" | |"),
            }
        }
        md.push('\n');
    }
    let sizes: Vec<String> = Metric::ALL
        .iter()
        .map(|&m| {
            let ns: Vec<String> = PAIRS.iter().filter_map(|&p| report.get(p, m)).map(|r| r.n.to_string()).collect();
            format!("{}: {}", m.label(), ns.join(", "))
        })
        .collect();
    let _ = writeln!(
        md,
        "\nP-values are Holm-adjusted within each metric. Non-zero paired differences per pair ({}).",
        sizes.join("; ")
    );
    md
}

/// Per-algorithm metric series from `metrics.csv` or sweep rows, aligned on
/// the (support, confidence) cells that every algorithm scored.
pub fn read_metric_series_from<R: Read>(input: R, origin: &Path) -> Result<Vec<(Algorithm, MetricSeries)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::format(origin, 1, format!("missing column `{name}`")))
    };
    let idx: Vec<usize> = METRICS_HEADER[..6].iter().map(|n| column(n)).collect::<Result<_>>()?;

    type Cell = (String, String);
    let mut cells: BTreeMap<Algorithm, BTreeMap<Cell, (f64, f64, f64)>> = BTreeMap::new();
    let mut order: Vec<Cell> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::format(origin, line, e.to_string()))?;
        let algorithm: Algorithm = record[idx[0]]
            .parse()
            .map_err(|e: cochange_core::miners::UnknownAlgorithm| Error::format(origin, line, e.to_string()))?;
        if record[idx[3]].is_empty() {
            continue;
        }
        let value = |j: usize| {
            record[idx[j]]
                .parse::<f64>()
                .map_err(|_| Error::format(origin, line, format!("`{}` is not a number", &record[idx[j]])))
        };
        let cell = (record[idx[1]].to_string(), record[idx[2]].to_string());
        if !order.contains(&cell) {
            order.push(cell.clone());
        }
        cells.entry(algorithm).or_default().insert(cell, (value(3)?, value(4)?, value(5)?));
    }

    let shared: Vec<&Cell> = order.iter().filter(|c| cells.values().all(|m| m.contains_key(*c))).collect();
    Ok(cells
        .iter()
        .map(|(&algorithm, by_cell)| {
            let mut series = MetricSeries::default();
            for cell in &shared {
                let (p, r, f) = by_cell[*cell];
                series.push(p, r, f);
            }
            (algorithm, series)
        })
        .collect())
}
