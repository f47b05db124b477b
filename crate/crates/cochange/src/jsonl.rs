//! `transactions.jsonl`: one commit per line,
//! `{"id": "<hash>", "ts": "YYYY-MM-DDThh:mm:ssZ", "files": ["a", "b"]}`,
//! files sorted and unique, LF line endings.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use cochange_core::TransactionDatabase;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::format::{iso8601, parse_iso8601};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Line {
    id: String,
    ts: String,
    files: Vec<String>,
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn write_transactions_to<W: Write>(db: &TransactionDatabase, mut out: W) -> std::io::Result<()> {
    for (i, t) in db.transactions().iter().enumerate() {
        let files: Vec<String> = db.paths_of(i).into_iter().map(json_string).collect();
        writeln!(
            out,
            "{{\"id\": {}, \"ts\": \"{}\", \"files\": [{}]}}",
            json_string(t.id()),
            iso8601(t.timestamp()),
            files.join(", ")
        )?;
    }
    out.flush()
}

pub fn write_transactions(db: &TransactionDatabase, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_transactions_to(db, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Parses a transactions file; `origin` only labels errors.
pub fn read_transactions_from<R: Read>(input: R, origin: &Path) -> Result<TransactionDatabase> {
    let mut builder = TransactionDatabase::builder();
    let mut reader = BufReader::new(input);
    let mut raw = String::new();
    let mut number = 0;
    loop {
        raw.clear();
        let read = reader.read_line(&mut raw).map_err(|e| Error::io(origin, e))?;
        if read == 0 {
            break;
        }
        number += 1;
        let line = raw.strip_suffix('\n').unwrap_or(&raw);
        if line.ends_with('\r') {
            return Err(Error::format(origin, number, "CRLF line ending"));
        }
        let parsed: Line =
            serde_json::from_str(line).map_err(|e| Error::format(origin, number, format!("invalid JSON: {e}")))?;
        let ts = parse_iso8601(&parsed.ts).ok_or_else(|| {
            Error::format(origin, number, format!("timestamp `{}` is not YYYY-MM-DDThh:mm:ssZ", parsed.ts))
        })?;
        if let Some(w) = parsed.files.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::format(
                origin,
                number,
                format!("files must be sorted and unique (`{}` before `{}`)", w[0], w[1]),
            ));
        }
        builder.push(parsed.id, ts, &parsed.files);
    }
    Ok(builder.build())
}

pub fn read_transactions(path: &Path) -> Result<TransactionDatabase> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_transactions_from(file, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cochange_core::Timestamp;

    fn parse(text: &str) -> Result<TransactionDatabase> {
        read_transactions_from(text.as_bytes(), Path::new("t.jsonl"))
    }

    #[test]
    fn exact_line_layout() {
        let mut b = TransactionDatabase::builder();
        b.push("abc", Timestamp(0), &["b \"q\".java", "a.java"]);
        b.push("def", Timestamp(60), &[] as &[&str]);
        let mut out = Vec::new();
        write_transactions_to(&b.build(), &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "{\"id\": \"abc\", \"ts\": \"1970-01-01T00:00:00Z\", \"files\": [\"a.java\", \"b \\\"q\\\".java\"]}\n\
             {\"id\": \"def\", \"ts\": \"1970-01-01T00:01:00Z\", \"files\": []}\n"
        );
    }

    #[test]
    fn malformed_line_reports_number() {
        let text = "{\"id\": \"a\", \"ts\": \"1970-01-01T00:00:00Z\", \"files\": [\"x\"]}\nnot json\n";
        match parse(text) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unsorted_files_rejected() {
        let text = "{\"id\": \"a\", \"ts\": \"1970-01-01T00:00:00Z\", \"files\": [\"y\", \"x\"]}\n";
        assert!(matches!(parse(text), Err(Error::Format { line: 1, .. })));
        let dup = "{\"id\": \"a\", \"ts\": \"1970-01-01T00:00:00Z\", \"files\": [\"x\", \"x\"]}\n";
        assert!(matches!(parse(dup), Err(Error::Format { line: 1, .. })));
    }

    #[test]
    fn bad_timestamp_and_crlf_rejected() {
        let text = "{\"id\": \"a\", \"ts\": \"1970-01-01\", \"files\": []}\n";
        assert!(matches!(parse(text), Err(Error::Format { line: 1, .. })));
        let crlf = "{\"id\": \"a\", \"ts\": \"1970-01-01T00:00:00Z\", \"files\": []}\r\n";
        assert!(matches!(parse(crlf), Err(Error::Format { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_empty_database() {
        assert!(parse("").unwrap().is_empty());
    }
}
