//! Number and timestamp renderings shared by every output file.

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use cochange_core::Timestamp;

const ISO: &str = "%Y-%m-%dT%H:%M:%SZ";

/// Six fractional digits. Rust rounds the exact binary value, ties to even.
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

/// `YYYY-MM-DDThh:mm:ssZ`.
pub fn iso8601(ts: Timestamp) -> String {
    DateTime::<Utc>::from_timestamp(ts.seconds(), 0)
        .map(|d| d.format(ISO).to_string())
        .unwrap_or_else(|| format!("@{}", ts.seconds()))
}

/// Strict inverse of [`iso8601`].
pub fn parse_iso8601(s: &str) -> Option<Timestamp> {
    let parsed = NaiveDateTime::parse_from_str(s, ISO).ok()?;
    let ts = Timestamp(parsed.and_utc().timestamp());
    (iso8601(ts) == s).then_some(ts)
}

/// Accepts `YYYY-MM-DD` (midnight UTC) or the full timestamp form.
pub fn parse_date_arg(s: &str) -> Option<Timestamp> {
    parse_iso8601(s).or_else(|| {
        let date = NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()?;
        Some(Timestamp(date.and_hms_opt(0, 0, 0)?.and_utc().timestamp()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits_half_even() {
        assert_eq!(fixed6(0.2), "0.200000");
        assert_eq!(fixed6(2.0 / 3.0), "0.666667");
        // exact binary ties
        assert_eq!(fixed6(0.0078125), "0.007812");
        assert_eq!(fixed6(0.0234375), "0.023438");
        assert_eq!(fixed6(1.0), "1.000000");
    }

    #[test]
    fn timestamps_round_trip() {
        let ts = parse_iso8601("2021-03-04T05:06:07Z").unwrap();
        assert_eq!(iso8601(ts), "2021-03-04T05:06:07Z");
        assert_eq!(parse_iso8601("2021-3-4T05:06:07Z"), None);
        assert_eq!(parse_iso8601("2021-03-04 05:06:07"), None);
        assert_eq!(parse_date_arg("1970-01-02"), Some(Timestamp(86_400)));
    }
}
