//! Reading file-level change history out of a Git repository.
//!
//! History comes from `git log` plumbing output: every commit reachable from
//! HEAD, merges diffed against their first parent, renames detected. A commit
//! is selected when at least one changed file matches the extension filter
//! (compared case-insensitively); each matching file yields one
//! [`ChangeRecord`].

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use cochange_core::{Interner, ItemId, Timestamp, TransactionDatabase};

use crate::error::{Error, Result};
use crate::format::iso8601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChangeType {
    Add,
    Modify,
    Rename,
    Delete,
}

impl ChangeType {
    pub fn as_str(self) -> &'static str {
        match self {
            ChangeType::Add => "add",
            ChangeType::Modify => "modify",
            ChangeType::Rename => "rename",
            ChangeType::Delete => "delete",
        }
    }

    /// Maps a `--name-status` letter. Copies count as additions and type
    /// changes as modifications; unmerged and unknown entries are ignored.
    fn from_status(status: &str) -> Option<Self> {
        match status.as_bytes().first()? {
            b'A' | b'C' => Some(ChangeType::Add),
            b'M' | b'T' => Some(ChangeType::Modify),
            b'R' => Some(ChangeType::Rename),
            b'D' => Some(ChangeType::Delete),
            _ => None,
        }
    }
}

impl fmt::Display for ChangeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeRecord {
    pub change_id: String,
    pub log: String,
    pub date: Timestamp,
    pub change_type: ChangeType,
    /// Repository-relative path; for renames, the new path.
    pub file: String,
    pub file_index: ItemId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionConfig {
    pub repo: PathBuf,
    /// Suffix such as `.java`.
    pub extension: String,
    pub since: Option<Timestamp>,
    pub until: Option<Timestamp>,
}

impl ExtractionConfig {
    pub fn new(repo: impl Into<PathBuf>) -> Self {
        Self { repo: repo.into(), extension: ".java".into(), since: None, until: None }
    }

    pub fn with_extension(mut self, extension: impl Into<String>) -> Self {
        self.extension = extension.into();
        self
    }

    fn matches(&self, path: &str) -> bool {
        let ext = self.extension.to_ascii_lowercase();
        path.len() >= ext.len() && path.to_ascii_lowercase().ends_with(&ext)
    }

    fn in_range(&self, ts: Timestamp) -> bool {
        self.since.is_none_or(|s| ts >= s) && self.until.is_none_or(|u| ts <= u)
    }
}

fn git(repo: &Path) -> Command {
    let mut cmd = Command::new("git");
    cmd.arg("-C").arg(repo).env("GIT_CONFIG_NOSYSTEM", "1").env("LC_ALL", "C");
    cmd
}

fn run_git(repo: &Path, args: &[&str]) -> Result<Vec<u8>> {
    let output = git(repo).args(args).output().map_err(|e| Error::GitRead(format!("cannot run git: {e}")))?;
    if !output.status.success() {
        return Err(Error::GitRead(String::from_utf8_lossy(&output.stderr).trim().to_string()));
    }
    Ok(output.stdout)
}

pub fn extract_history(config: &ExtractionConfig) -> Result<Vec<ChangeRecord>> {
    if config.extension.is_empty() {
        return Err(Error::Usage("extension filter must not be empty".into()));
    }
    if !config.repo.is_dir() {
        return Err(Error::RepoNotFound(config.repo.clone()));
    }
    let inside = git(&config.repo)
        .args(["rev-parse", "--is-inside-work-tree"])
        .output()
        .map_err(|e| Error::GitRead(format!("cannot run git: {e}")))?;
    let bare = git(&config.repo).args(["rev-parse", "--is-bare-repository"]).output().ok();
    let is_repo = inside.status.success() || bare.is_some_and(|o| o.status.success());
    if !is_repo {
        return Err(Error::NotAGitRepository(config.repo.clone()));
    }
    // A repository without commits has no history.
    if !git(&config.repo)
        .args(["rev-parse", "--verify", "--quiet", "HEAD"])
        .output()
        .map_err(|e| Error::GitRead(e.to_string()))?
        .status
        .success()
    {
        return Ok(Vec::new());
    }

    let raw = run_git(
        &config.repo,
        &[
            "-c",
            "core.quotePath=false",
            "log",
            "-z",
            "--no-color",
            "--format=%x1e%H%x1f%ct%x1f%B%x1f",
            "--name-status",
            "-M",
            "--diff-merges=first-parent",
            "HEAD",
        ],
    )?;
    parse_log(&String::from_utf8_lossy(&raw), config)
}

struct RawCommit<'a> {
    hash: &'a str,
    timestamp: Timestamp,
    message: &'a str,
    changes: Vec<(ChangeType, &'a str)>,
}

fn parse_commit(chunk: &str) -> Result<RawCommit<'_>> {
    let mut header = chunk.splitn(4, '\x1f');
    let (Some(hash), Some(ct), Some(message), Some(rest)) =
        (header.next(), header.next(), header.next(), header.next())
    else {
        return Err(Error::GitRead(format!("unexpected log entry: {:.80}", chunk)));
    };
    let seconds: i64 = ct.trim().parse().map_err(|_| Error::GitRead(format!("bad commit time `{ct}` for {hash}")))?;

    let mut fields = rest.split('\0').map(|f| f.trim_start_matches('\n')).filter(|f| !f.is_empty());
    let mut changes = Vec::new();
    while let Some(status) = fields.next() {
        let two_paths = matches!(status.as_bytes().first(), Some(b'R' | b'C'));
        let path = if two_paths {
            fields.next();
            fields.next()
        } else {
            fields.next()
        };
        let path = path.ok_or_else(|| Error::GitRead(format!("truncated file list for {hash}")))?;
        if let Some(kind) = ChangeType::from_status(status) {
            changes.push((kind, path));
        }
    }
    Ok(RawCommit { hash, timestamp: Timestamp(seconds), message: message.trim_end_matches('\n'), changes })
}

/// Parses `git log -z --name-status` output produced with the format used by
/// [`extract_history`].
pub fn parse_log(raw: &str, config: &ExtractionConfig) -> Result<Vec<ChangeRecord>> {
    let mut selected = Vec::new();
    for chunk in raw.split('\x1e').filter(|c| !c.trim().is_empty()) {
        let commit = parse_commit(chunk)?;
        if !config.in_range(commit.timestamp) {
            continue;
        }
        let mut seen = HashSet::new();
        let mut files: Vec<(ChangeType, &str)> =
            commit.changes.iter().copied().filter(|(_, p)| config.matches(p) && seen.insert(*p)).collect();
        if files.is_empty() {
            continue;
        }
        files.sort_by(|a, b| a.1.cmp(b.1));
        selected.push((commit, files));
    }
    selected.sort_by(|(a, _), (b, _)| a.timestamp.cmp(&b.timestamp).then_with(|| a.hash.cmp(b.hash)));

    let mut interner = Interner::new();
    let mut records = Vec::new();
    for (commit, files) in selected {
        for (change_type, file) in files {
            records.push(ChangeRecord {
                change_id: commit.hash.to_string(),
                log: commit.message.to_string(),
                date: commit.timestamp,
                change_type,
                file: file.to_string(),
                file_index: interner.intern(file),
            });
        }
    }
    Ok(records)
}

/// One transaction per commit holding the commit's distinct files.
pub fn to_transactions(records: &[ChangeRecord]) -> TransactionDatabase {
    let mut builder = TransactionDatabase::builder();
    let mut start = 0;
    while start < records.len() {
        let id = &records[start].change_id;
        let end = start + records[start..].iter().take_while(|r| &r.change_id == id).count();
        let mut files: Vec<&str> = records[start..end].iter().map(|r| r.file.as_str()).collect();
        files.sort_unstable();
        files.dedup();
        builder.push(id.clone(), records[start].date, &files);
        start = end;
    }
    builder.build()
}

/// `records.csv`: `change_id,date,change_type,file`.
pub fn write_records_to<W: Write>(records: &[ChangeRecord], out: W) -> Result<()> {
    let mut w = crate::report::csv_writer(out);
    w.write_record(["change_id", "date", "change_type", "file"])?;
    for r in records {
        w.write_record([r.change_id.as_str(), &iso8601(r.date), r.change_type.as_str(), &r.file])?;
    }
    w.flush().map_err(|e| Error::io("records.csv", e))?;
    Ok(())
}

pub fn write_records(records: &[ChangeRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_records_to(records, std::io::BufWriter::new(file))
}
