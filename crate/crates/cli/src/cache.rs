//! Append-only result store: one JSON record per line in `results.jsonl`.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FILE_NAME: &str = "results.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub key: String,
    pub payload: Value,
    /// Seconds since the Unix epoch when the record was written. Not part of
    /// the payload, so it never reaches command output.
    pub written_at: u64,
}

/// `op|version|input`, with `input` serialized with sorted keys.
pub fn request_key(op: &str, input: &Value) -> String {
    format!("{op}|{}|{input}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    /// Opens (creating if needed) the store in `dir`. On failure the reason
    /// is returned so the caller can warn and continue without a cache.
    pub fn open(dir: &Path) -> Result<Self, String> {
        fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let path = dir.join(FILE_NAME);
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| format!("cannot open {}: {e}", path.display()))?;
        Ok(Self { path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest record for `key`. Lines that do not parse are skipped; each
    /// produces a warning.
    pub fn get(&self, key: &str, warnings: &mut Vec<String>) -> Option<Value> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) => {
                warnings.push(format!("cache read failed: {e}"));
                return None;
            }
        };
        let mut found = None;
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    warnings.push(format!("cache line {} unreadable: {e}", n + 1));
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<ResultRecord>(&line) {
                Ok(r) if r.key == key => found = Some(r.payload),
                Ok(_) => {}
                Err(e) => warnings.push(format!("skipping corrupt cache line {}: {e}", n + 1)),
            }
        }
        found
    }

    /// Appends one record with a single write.
    pub fn put(&self, key: &str, payload: &Value) -> Result<(), String> {
        let written_at =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let record = ResultRecord { key: key.to_owned(), payload: payload.clone(), written_at };
        let mut line = serde_json::to_string(&record).map_err(|e| e.to_string())?;
        line.push('\n');
        let mut f = OpenOptions::new()
            .append(true)
            .open(&self.path)
            .map_err(|e| format!("cannot open {}: {e}", self.path.display()))?;
        f.write_all(line.as_bytes()).map_err(|e| format!("cache write failed: {e}"))
    }
}
