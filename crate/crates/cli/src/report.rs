use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// An ordered report: the config echo, the command's payload, and human-readable lines.
pub struct Report {
    pub command: String,
    pub config: Value,
    pub body: Map<String, Value>,
    pub lines: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report { command: command.into(), config, body: Map::new(), lines: Vec::new(), pass: true }
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.body.insert(key.into(), value);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records one check, keeping the overall verdict.
    pub fn check(&mut self, pass: bool, label: impl AsRef<str>) {
        self.pass &= pass;
        self.lines.push(format!("{} {}", if pass { "PASS" } else { "FAIL" }, label.as_ref()));
    }

    fn payload(&self) -> Value {
        json!({
            "command": self.command,
            "config": self.config,
            "result": Value::Object(self.body.clone()),
            "pass": self.pass,
        })
    }

    /// SHA-256 of the compact JSON payload; object keys are sorted, so equal runs hash equally.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.payload()).expect("report serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn render(&self, format: Format) -> String {
        let hash = self.hash();
        match format {
            Format::Json => {
                let mut v = self.payload();
                v["sha256"] = Value::String(hash);
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "{} {}", self.command, self.config);
                for l in &self.lines {
                    let _ = writeln!(s, "{l}");
                }
                let _ = writeln!(s, "{}", if self.pass { "overall: PASS" } else { "overall: FAIL" });
                let _ = writeln!(s, "sha256: {hash}");
                s
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let text = self.render(format);
        match out {
            Some(p) => std::fs::write(p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
