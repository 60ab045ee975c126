//! JSON Lines cache of classification reports.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};

use ducci::closure::HClosureReport;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    #[serde(flatten)]
    pub report: HClosureReport,
    pub wall_ms: u64,
    pub tool_version: String,
}

impl CacheRecord {
    pub fn new(report: HClosureReport, wall_ms: u64) -> Self {
        CacheRecord {
            report,
            wall_ms,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn key(&self) -> (usize, u64) {
        (self.report.n, self.report.m)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[derive(Debug, Default)]
pub struct CacheContents {
    /// Records for the current tool version, last line winning per `(n, m)`.
    pub records: BTreeMap<(usize, u64), CacheRecord>,
    pub stale: usize,
    /// Lines that failed to parse, e.g. a write cut short.
    pub malformed: usize,
}

/// Reads a cache file. A missing file is an empty cache.
pub fn read_cache(path: &Path) -> CliResult<CacheContents> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(CacheContents::default()),
        Err(e) => return Err(CliError::io(path, e)),
    };
    let mut contents = CacheContents::default();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CacheRecord>(&line) {
            Ok(rec) if rec.tool_version == TOOL_VERSION => {
                contents.records.insert(rec.key(), rec);
            }
            Ok(_) => contents.stale += 1,
            Err(_) => contents.malformed += 1,
        }
    }
    Ok(contents)
}

/// Append-only writer. Each record is flushed as soon as it is written.
pub struct CacheWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CacheWriter {
    pub fn open(path: &Path) -> CliResult<Self> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .read(true)
            .open(path)
            .map_err(|e| CliError::io(path, e))?;
        // A previous run may have died mid-line.
        let len = file.metadata().map_err(|e| CliError::io(path, e))?.len();
        if len > 0 && !ends_with_newline(path, len)? {
            file.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
        }
        Ok(CacheWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, record: &CacheRecord) -> CliResult<()> {
        let mut line = record.to_line();
        line.push('\n');
        self.out
            .write_all(line.as_bytes())
            .and_then(|_| self.out.flush())
            .map_err(|e| CliError::io(&self.path, e))
    }
}

fn ends_with_newline(path: &Path, len: u64) -> CliResult<bool> {
    use std::io::{Read, Seek, SeekFrom};
    let mut f = File::open(path).map_err(|e| CliError::io(path, e))?;
    f.seek(SeekFrom::Start(len - 1))
        .map_err(|e| CliError::io(path, e))?;
    let mut last = [0u8; 1];
    f.read_exact(&mut last).map_err(|e| CliError::io(path, e))?;
    Ok(last[0] == b'\n')
}

#[cfg(test)]
mod tests {
    use super::*;
    use ducci::closure::classify_fast;
    use ducci::RingParams;

    fn record(n: usize, m: u64, wall_ms: u64) -> CacheRecord {
        CacheRecord::new(
            classify_fast(RingParams::new(n, m).unwrap()).unwrap(),
            wall_ms,
        )
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let recs = [
            record(4, 3, 1),
            record(6, 3, 2),
            record(9, 8, 3),
            record(2, 2, 0),
        ];
        let mut w = CacheWriter::open(&path).unwrap();
        for r in &recs {
            w.append(r).unwrap();
        }
        drop(w);
        let back = read_cache(&path).unwrap();
        assert_eq!(back.records.len(), recs.len());
        for r in &recs {
            assert_eq!(&back.records[&r.key()], r);
        }
    }

    #[test]
    fn last_record_wins_and_bad_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let mut first = record(4, 3, 5);
        first.report.steps_used = 999;
        let second = record(4, 3, 7);
        let mut stale = record(5, 3, 1);
        stale.tool_version = "other 0.0.0".into();
        let body = format!(
            "{}\n{}\n\n{}\n{{\"n\":4,",
            first.to_line(),
            stale.to_line(),
            second.to_line()
        );
        std::fs::write(&path, body).unwrap();
        let back = read_cache(&path).unwrap();
        assert_eq!(back.records.len(), 1);
        assert_eq!(back.records[&(4, 3)], second);
        assert_eq!((back.stale, back.malformed), (1, 1));

        let mut w = CacheWriter::open(&path).unwrap();
        w.append(&record(6, 5, 0)).unwrap();
        drop(w);
        let back = read_cache(&path).unwrap();
        assert_eq!(back.records.len(), 2);
        assert_eq!(back.malformed, 1);
    }

    #[test]
    fn line_schema() {
        let line = record(4, 3, 12).to_line();
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        for key in [
            "n",
            "m",
            "L",
            "P",
            "classification",
            "alpha",
            "betas_raw",
            "beta_canonical",
            "gamma",
            "anomalies",
            "steps",
            "wall_ms",
            "tool_version",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["classification"], "h-closed");
        assert_eq!(v["beta_canonical"], -1);
        assert_eq!(v["wall_ms"], 12);
    }

    #[test]
    fn missing_file_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let back = read_cache(&dir.path().join("absent.jsonl")).unwrap();
        assert!(back.records.is_empty());
    }
}
