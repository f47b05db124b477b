#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

pub fn fixture_bundle() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fixture.bundle")
}

/// Clones the bundled fixture repository into a fresh temporary directory.
pub fn clone_fixture() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let repo = dir.path().join("repo");
    let status = Command::new("git")
        .args(["clone", "-q"])
        .arg(fixture_bundle())
        .arg(&repo)
        .env("GIT_CONFIG_NOSYSTEM", "1")
        .status()
        .unwrap();
    assert!(status.success(), "cloning the fixture bundle failed");
    (dir, repo)
}

/// A scratch repository driven through `git` with fixed identities and dates.
pub struct ScratchRepo {
    pub dir: TempDir,
    clock: i64,
}

impl ScratchRepo {
    pub fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let repo = Self { dir, clock: 1_600_000_000 };
        repo.git(&["init", "-q", "-b", "main"]);
        repo
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn git(&self, args: &[&str]) -> Output {
        let date = format!("@{} +0000", self.clock);
        let out = Command::new("git")
            .arg("-C")
            .arg(self.path())
            .args(["-c", "user.name=T", "-c", "user.email=t@example.com", "-c", "commit.gpgsign=false"])
            .args(args)
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_AUTHOR_DATE", &date)
            .env("GIT_COMMITTER_DATE", &date)
            .output()
            .unwrap();
        assert!(out.status.success(), "git {args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out
    }

    pub fn write(&self, file: &str, text: &str) {
        let path = self.path().join(file);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, text).unwrap();
        self.git(&["add", "--", file]);
    }

    /// Commits staged changes one day after the previous commit.
    pub fn commit(&mut self, message: &str) -> String {
        self.clock += 86_400;
        self.git(&["commit", "-q", "-m", message]);
        self.head()
    }

    pub fn head(&self) -> String {
        String::from_utf8(self.git(&["rev-parse", "HEAD"]).stdout).unwrap().trim().to_string()
    }

    pub fn clock(&self) -> i64 {
        self.clock
    }

    pub fn advance(&mut self) {
        self.clock += 86_400;
    }
}

pub fn cochange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cochange")).args(args).env_remove("COCHANGE_LOG").output().unwrap()
}

pub fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}
