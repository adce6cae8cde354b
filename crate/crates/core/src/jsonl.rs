//! Versioned JSON-lines record files.
//!
//! One UTF-8 JSON document per line; every line carries a `schema_version`
//! field. Readers reject lines whose major version differs from the
//! library's, so incompatible files fail loudly instead of half-parsing.

use crate::model::SCHEMA_VERSION;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum JsonlError {
    #[error("io on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Parse {
        path: String,
        line: usize,
        detail: String,
    },
    #[error("{path}:{line}: schema_version {found:?} incompatible with {supported} (major mismatch)")]
    SchemaVersion {
        path: String,
        line: usize,
        found: String,
        supported: &'static str,
    },
}

fn major_of(version: &str) -> Option<&str> {
    version.split('.').next().filter(|s| !s.is_empty())
}

#[derive(Deserialize)]
struct Envelope {
    schema_version: String,
}

/// Streaming reader over a versioned JSON-lines file.
pub struct JsonlReader<T> {
    path: String,
    lines: std::io::Lines<BufReader<File>>,
    line_no: usize,
    _marker: std::marker::PhantomData<T>,
}

impl<T: DeserializeOwned> JsonlReader<T> {
    pub fn open(path: &Path) -> Result<Self, JsonlError> {
        let file = File::open(path).map_err(|source| JsonlError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(JsonlReader {
            path: path.display().to_string(),
            lines: BufReader::new(file).lines(),
            line_no: 0,
            _marker: std::marker::PhantomData,
        })
    }
}

impl<T: DeserializeOwned> Iterator for JsonlReader<T> {
    type Item = Result<T, JsonlError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(source) => {
                    return Some(Err(JsonlError::Io {
                        path: self.path.clone(),
                        source,
                    }))
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let envelope: Envelope = match serde_json::from_str(&line) {
                Ok(env) => env,
                Err(e) => {
                    return Some(Err(JsonlError::Parse {
                        path: self.path.clone(),
                        line: self.line_no,
                        detail: format!("missing or invalid schema_version: {e}"),
                    }))
                }
            };
            if major_of(&envelope.schema_version) != major_of(SCHEMA_VERSION) {
                return Some(Err(JsonlError::SchemaVersion {
                    path: self.path.clone(),
                    line: self.line_no,
                    found: envelope.schema_version,
                    supported: SCHEMA_VERSION,
                }));
            }
            return Some(
                serde_json::from_str(&line).map_err(|e| JsonlError::Parse {
                    path: self.path.clone(),
                    line: self.line_no,
                    detail: e.to_string(),
                }),
            );
        }
    }
}

/// Read a whole record file into memory.
pub fn read_all<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, JsonlError> {
    JsonlReader::open(path)?.collect()
}

/// Write records one per line. Returns the number written.
pub fn write_all<'a, T: Serialize + 'a>(
    path: &Path,
    records: impl IntoIterator<Item = &'a T>,
) -> Result<usize, JsonlError> {
    let io_err = |source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    let mut count = 0;
    for record in records {
        let line = serde_json::to_string(record).map_err(|e| JsonlError::Parse {
            path: path.display().to_string(),
            line: count + 1,
            detail: e.to_string(),
        })?;
        writer.write_all(line.as_bytes()).map_err(io_err)?;
        writer.write_all(b"\n").map_err(io_err)?;
        count += 1;
    }
    writer.flush().map_err(io_err)?;
    Ok(count)
}
