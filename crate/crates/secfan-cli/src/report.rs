//! Deterministic structured reports: a flat key/value document with stable
//! ordering, suitable for golden-file comparison. Identical input and flags
//! always produce identical bytes.

use sha2::{Digest, Sha256};
use std::fmt::Display;

#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    /// Start a report with the command echo and the input hash.
    pub fn new(command: &str, input_text: &str) -> Self {
        let mut r = Report::default();
        r.kv("command", command);
        let mut hasher = Sha256::new();
        hasher.update(input_text.as_bytes());
        r.kv("input-sha256", hex::encode(hasher.finalize()));
        r
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    /// A key with a space-separated list value.
    pub fn kv_list<T: Display>(&mut self, key: &str, values: impl IntoIterator<Item = T>) {
        let joined: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
        self.lines.push(format!("{key}: [{}]", joined.join(" ")));
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}
