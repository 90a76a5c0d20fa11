use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use soliton_verify::{write_identity_csv, IdentityReport};

use crate::CliError;

pub const MANIFEST: &str = "manifest.txt";
pub const IDENTITY_FILE: &str = "identity_report.csv";

/// Files produced by one run, held in memory until emitted.
#[derive(Debug, Clone, Default)]
pub struct Results {
    pub files: Vec<(String, Vec<u8>)>,
    pub reports: Vec<IdentityReport>,
}

impl Results {
    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

fn hex(digest: &[u8]) -> String {
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write every file plus `identity_report.csv` into `dir`, then a manifest
/// of `sha256  bytes  name` lines sorted by name.
pub fn emit_report(results: &Results, dir: &Path) -> Result<Vec<Entry>, CliError> {
    let io_err = |path: PathBuf| move |e: io::Error| CliError::Output { path, source: e };
    fs::create_dir_all(dir).map_err(io_err(dir.to_path_buf()))?;
    let mut files = results.files.clone();
    let mut ident = Vec::new();
    write_identity_csv(&mut ident, &results.reports)?;
    files.push((IDENTITY_FILE.to_string(), ident));
    files.sort_by(|a, b| a.0.cmp(&b.0));

    let mut entries = Vec::with_capacity(files.len());
    let mut manifest = String::new();
    for (name, bytes) in &files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(io_err(path.clone()))?;
        let e = Entry { name: name.clone(), sha256: hex(&Sha256::digest(bytes)), bytes: bytes.len() };
        manifest.push_str(&format!("{}  {}  {}\n", e.sha256, e.bytes, e.name));
        entries.push(e);
    }
    let path = dir.join(MANIFEST);
    fs::write(&path, manifest).map_err(io_err(path.clone()))?;
    Ok(entries)
}
