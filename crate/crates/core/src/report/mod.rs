//! Reproduction recipes for the published tables and figures, plus result persistence.

mod figures;
mod tables;
mod verify;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ebm::EbmError;
use crate::search::SearchError;
use crate::ska::SkaError;

pub use figures::{fig2, fig45, run_figure, Fig2Config, Fig45Config, FigureId};
pub use tables::{run_table, Budget, TableId};
pub use verify::{verify_word, OrderReport, VerifyReport};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Ska(#[from] SkaError),
    #[error(transparent)]
    Ebm(#[from] EbmError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

/// Rectangular result with string cells, written as CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// A budget cut the requested range short.
    pub truncated: bool,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Self {
            name: name.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            truncated: false,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column(&self, header: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == header)
    }

    /// Cell at `row` under `header`.
    pub fn cell(&self, row: usize, header: &str) -> Option<&str> {
        Some(self.rows.get(row)?.get(self.column(header)?)?.as_str())
    }

    /// Rows whose `header` cell equals `value`.
    pub fn filter<'a>(
        &'a self,
        header: &str,
        value: &'a str,
    ) -> impl Iterator<Item = &'a Vec<String>> + 'a {
        let col = self.column(header);
        self.rows
            .iter()
            .filter(move |r| col.is_some_and(|c| r[c] == value))
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)
            .map_err(|e| ReportError::Csv(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r)
                .map_err(|e| ReportError::Csv(e.to_string()))?;
        }
        if self.truncated {
            let mut marker = vec![String::new(); self.headers.len()];
            marker[0] = "# truncated: budget exhausted".into();
            w.write_record(&marker)
                .map_err(|e| ReportError::Csv(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ReportError::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ReportError::Csv(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command and check its outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub backend: String,
    pub code_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(
        command_line: Vec<String>,
        config: Value,
        seed: Option<u64>,
        backend: impl ToString,
    ) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command_line,
            config,
            seed,
            backend: backend.to_string(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            outputs: Vec::new(),
        }
    }

    /// Writes `bytes` to `path` and records its digest.
    pub fn write_output(&mut self, path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
        std::fs::write(path, bytes).map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), ReportError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Checks each recorded output against its digest.
    pub fn verify_outputs(&self) -> Result<(), ReportError> {
        for o in &self.outputs {
            let path = Path::new(&o.path);
            let bytes = std::fs::read(path).map_err(|source| ReportError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if sha256_hex(&bytes) != o.sha256 {
                return Err(ReportError::Invalid(format!(
                    "digest mismatch for {}",
                    o.path
                )));
            }
        }
        Ok(())
    }
}

/// Writes `<stem>.csv`, `<stem>.json` and the `<stem>.manifest.json` that covers them.
pub fn write_table(
    dir: &Path,
    table: &Table,
    manifest: &mut RunManifest,
) -> Result<PathBuf, ReportError> {
    std::fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    manifest.write_output(
        &dir.join(format!("{}.csv", table.name)),
        table.to_csv()?.as_bytes(),
    )?;
    manifest.write_output(
        &dir.join(format!("{}.json", table.name)),
        serde_json::to_string_pretty(table)?.as_bytes(),
    )?;
    let path = dir.join(format!("{}.manifest.json", table.name));
    manifest.save(&path)?;
    Ok(path)
}

/// Scientific notation that round-trips an f64.
pub(crate) fn sci(x: f64) -> String {
    format!("{x:e}")
}
