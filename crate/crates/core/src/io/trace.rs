use std::fmt::Write as _;
use std::time::Duration;

use sha2::{Digest, Sha256};

/// First 16 hex digits of the SHA-256 of `text`.
pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(8).fold(String::new(), |mut s, b| {
        write!(s, "{b:02x}").expect("string write");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub operation: String,
    /// One-based mutation index or group, when the operation has one.
    pub index: Option<usize>,
    pub elapsed: Duration,
    pub digest: String,
}

/// Append-only log of operations and digests of their canonical outputs.
#[derive(Debug, Clone, Default)]
pub struct TraceLog {
    records: Vec<TraceRecord>,
}

impl TraceLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, operation: &str, index: Option<usize>, elapsed: Duration, output: &str) {
        self.records.push(TraceRecord {
            operation: operation.to_string(),
            index,
            elapsed,
            digest: digest(output),
        });
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    /// One line per record; elapsed times are included only on request so
    /// that the default rendering is reproducible.
    pub fn render(&self, timings: bool) -> String {
        let mut s = String::new();
        for (i, r) in self.records.iter().enumerate() {
            let index = r.index.map_or_else(|| "-".to_string(), |k| k.to_string());
            write!(s, "{i}\t{}\t{index}\t{}", r.operation, r.digest).expect("string write");
            if timings {
                write!(s, "\t{:.3}ms", r.elapsed.as_secs_f64() * 1e3).expect("string write");
            }
            s.push('\n');
        }
        s
    }
}
