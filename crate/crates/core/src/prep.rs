//! Transaction filtering and the chronological train/test split.

use chrono::{DateTime, Datelike, Months, NaiveDate, Utc};

use crate::db::{Timestamp, TransactionDatabase};

/// Smallest transaction kept: a single file predicts nothing.
pub const MIN_FILES: usize = 2;
/// Largest transaction kept; bulk changes are dropped.
pub const MAX_FILES: usize = 100;
/// Test window target size before month rounding.
pub const TEST_TRANSACTIONS: usize = 1000;

/// Keeps transactions touching between 2 and 100 files inclusive.
pub fn filter_transactions(db: &TransactionDatabase) -> TransactionDatabase {
    db.retain(|t| (MIN_FILES..=MAX_FILES).contains(&t.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCounts {
    pub total: usize,
    pub after_filtering: usize,
    pub train: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub train: TransactionDatabase,
    pub test: TransactionDatabase,
    /// Timestamps of the first and last test transactions.
    pub evaluation_period: (Timestamp, Timestamp),
    pub counts: SplitCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("cannot split {0} transactions into non-empty training and test sets")]
    EmptySplit(usize),
    #[error("timestamp {0} is outside the supported calendar range")]
    TimestampOutOfRange(i64),
}

/// Filters `db` and splits the result.
pub fn prepare(db: &TransactionDatabase) -> Result<SplitResult, SplitError> {
    let filtered = filter_transactions(db);
    let mut split = split_train_test(&filtered)?;
    split.counts.total = db.len();
    Ok(split)
}

/// Chronological split of an already filtered database.
///
/// The test window starts as the last `min(1000, ⌊n/2⌋)` transactions. Its
/// start is then moved back to the first instant of its UTC calendar month.
/// If the window now reaches back more than one year before the newest
/// transaction it is cut to that year, and if it holds more than half of the
/// database the oldest window transactions are handed back to training.
pub fn split_train_test(db: &TransactionDatabase) -> Result<SplitResult, SplitError> {
    let n = db.len();
    let half = n / 2;
    if half == 0 {
        return Err(SplitError::EmptySplit(n));
    }
    let txns = db.transactions();
    let candidate = TEST_TRANSACTIONS.min(half);
    let earliest = txns[n - candidate].timestamp();
    let newest = txns[n - 1].timestamp();

    let month_start = start_of_month(earliest)?;
    let mut start = txns.partition_point(|t| t.timestamp() < month_start);

    let year_ago = one_year_before(newest)?;
    if txns[start].timestamp() < year_ago {
        start = txns.partition_point(|t| t.timestamp() < year_ago);
    }

    start = start.max(n - half);
    if start == 0 || start == n {
        return Err(SplitError::EmptySplit(n));
    }

    let (train, test) = db.split_at(start);
    let evaluation_period = (txns[start].timestamp(), newest);
    let counts = SplitCounts { total: n, after_filtering: n, train: train.len(), test: test.len() };
    Ok(SplitResult { train, test, evaluation_period, counts })
}

fn to_datetime(ts: Timestamp) -> Result<DateTime<Utc>, SplitError> {
    DateTime::from_timestamp(ts.seconds(), 0).ok_or(SplitError::TimestampOutOfRange(ts.seconds()))
}

/// First second of the UTC calendar month containing `ts`.
pub fn start_of_month(ts: Timestamp) -> Result<Timestamp, SplitError> {
    let dt = to_datetime(ts)?;
    let first = NaiveDate::from_ymd_opt(dt.year(), dt.month(), 1)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .ok_or(SplitError::TimestampOutOfRange(ts.seconds()))?;
    Ok(Timestamp(first.and_utc().timestamp()))
}

/// Same wall-clock instant twelve calendar months earlier (clamped to the end
/// of a shorter month, so 29 February maps to 28 February).
pub fn one_year_before(ts: Timestamp) -> Result<Timestamp, SplitError> {
    let dt = to_datetime(ts)?;
    dt.checked_sub_months(Months::new(12))
        .map(|d| Timestamp(d.timestamp()))
        .ok_or(SplitError::TimestampOutOfRange(ts.seconds()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;
    use alloc::vec::Vec;

    fn ts(y: i32, m: u32, d: u32) -> Timestamp {
        Timestamp(NaiveDate::from_ymd_opt(y, m, d).unwrap().and_hms_opt(12, 0, 0).unwrap().and_utc().timestamp())
    }

    fn db_of_sizes(sizes: &[usize]) -> TransactionDatabase {
        let mut b = TransactionDatabase::builder();
        for (t, &size) in sizes.iter().enumerate() {
            let files: Vec<String> = (0..size).map(|i| format!("f{i}")).collect();
            b.push(format!("{t:03}"), Timestamp(t as i64), &files);
        }
        b.build()
    }

    #[test]
    fn filter_boundaries() {
        let filtered = filter_transactions(&db_of_sizes(&[1, 2, 100, 101, 3]));
        let sizes: Vec<usize> = filtered.transactions().iter().map(|t| t.len()).collect();
        assert_eq!(sizes, [2, 100, 3]);
    }

    #[test]
    fn month_and_year_helpers() {
        assert_eq!(start_of_month(ts(2021, 3, 17)).unwrap(), Timestamp(ts(2021, 3, 1).0 - 12 * 3600));
        assert_eq!(one_year_before(ts(2020, 2, 29)).unwrap(), ts(2019, 2, 28));
        assert_eq!(one_year_before(ts(2021, 6, 15)).unwrap(), ts(2020, 6, 15));
    }

    #[test]
    fn too_small_to_split() {
        let mut b = TransactionDatabase::builder();
        b.push("a", ts(2020, 1, 1), &["x", "y"]);
        assert_eq!(split_train_test(&b.build()), Err(SplitError::EmptySplit(1)));
        assert_eq!(split_train_test(&TransactionDatabase::empty()), Err(SplitError::EmptySplit(0)));
    }

    #[test]
    fn two_transactions_split_one_one() {
        let mut b = TransactionDatabase::builder();
        b.push("a", ts(2020, 1, 1), &["x", "y"]);
        b.push("b", ts(2020, 1, 2), &["x", "y"]);
        let s = split_train_test(&b.build()).unwrap();
        assert_eq!((s.counts.train, s.counts.test), (1, 1));
    }
}
