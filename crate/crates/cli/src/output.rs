//! Atomic file output and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// An output directory that records every file written into it.
pub struct Output {
    root: PathBuf,
    files: Vec<FileRecord>,
}

impl Output {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), files: Vec::new() })
    }

    /// Writes `contents` to `name` (relative to the root) through a temporary
    /// file in the same directory, so readers never see a partial file.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let target = self.root.join(name);
        let dir = target.parent().unwrap_or(&self.root).to_path_buf();
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).with_context(|| format!("writing {}", target.display()))?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target).with_context(|| format!("writing {}", target.display()))?;
        self.files.push(FileRecord { path: name.to_string(), bytes: contents.len(), sha256: hex_digest(contents) });
        Ok(())
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Writes `manifest.json` describing the run. It carries no timestamps so
    /// that identical inputs give identical directories.
    pub fn finish(mut self, command: &str, settings: serde_json::Value) -> Result<PathBuf> {
        let manifest = Manifest {
            tool: "dke",
            version: env!("CARGO_PKG_VERSION"),
            command,
            settings,
            files: std::mem::take(&mut self.files),
        };
        self.write_json("manifest.json", &manifest)?;
        Ok(self.root)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    settings: serde_json::Value,
    files: Vec<FileRecord>,
}

fn hex_digest(contents: &str) -> String {
    Sha256::digest(contents.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// A CSV line from already formatted fields.
pub fn csv_line<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(|f| f.as_ref()).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}
