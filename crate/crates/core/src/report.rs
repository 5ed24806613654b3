//! Deterministic command reports: JSON with `schema: 1` or plain text.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

/// Outcome for one input file.
#[derive(Clone, Debug)]
pub struct FileResult {
    pub file: String,
    pub verdict: bool,
    /// What was verified, stated as a predicate.
    pub predicate: String,
    pub details: Value,
    /// Human-readable summary lines for text output.
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl ErrorInfo {
    pub fn from_error(e: &Error, file: Option<&str>) -> Self {
        let (line, column) = match e {
            Error::Parse { line, column, .. } => (Some(*line), Some(*column)),
            _ => (None, None),
        };
        let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        let message = match e {
            Error::Parse { message, .. } => message.clone(),
            other => other.to_string(),
        };
        ErrorInfo { kind, message, file: file.map(str::to_string), line, column }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub flags: Value,
    pub inputs: Vec<InputDigest>,
    pub results: Vec<FileResult>,
    pub error: Option<ErrorInfo>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str, flags: Value) -> Self {
        Report { command: command.to_string(), flags, inputs: Vec::new(), results: Vec::new(), error: None }
    }

    pub fn add_input(&mut self, file: &str, content: &[u8]) {
        self.inputs.push(InputDigest { file: file.to_string(), sha256: sha256_hex(content) });
    }

    /// `None` when an input error stopped the command.
    pub fn verdict(&self) -> Option<bool> {
        if self.error.is_some() {
            None
        } else {
            Some(self.results.iter().all(|r| r.verdict))
        }
    }

    /// 0 verified, 1 falsified, 2 input error.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Some(true) => 0,
            Some(false) => 1,
            None => 2,
        }
    }

    /// Digest over the command, flags and input digests.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        h.update([0]);
        h.update(self.flags.to_string().as_bytes());
        for i in &self.inputs {
            h.update([0]);
            h.update(i.file.as_bytes());
            h.update([0]);
            h.update(i.sha256.as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|r| json!({"file": r.file, "verdict": r.verdict, "predicate": r.predicate, "details": r.details}))
            .collect();
        let mut v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "flags": self.flags,
            "inputs": self.inputs,
            "digest": self.digest(),
            "verdict": self.verdict(),
            "results": results,
        });
        if let Some(e) = &self.error {
            v["error"] = serde_json::to_value(e).expect("serializable");
        }
        v
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("== {} [{}]\n", r.file, if r.verdict { "PASS" } else { "FAIL" }));
            out.push_str(&format!("predicate: {}\n", r.predicate));
            for l in &r.lines {
                out.push_str(&format!("  {l}\n"));
            }
        }
        if let Some(e) = &self.error {
            let loc = match (e.line, e.column) {
                (Some(l), Some(c)) => format!(":{l}:{c}"),
                _ => String::new(),
            };
            out.push_str(&format!("error: {}{loc}: {}\n", e.file.as_deref().unwrap_or("<input>"), e.message));
        }
        let v = match self.verdict() {
            Some(true) => "verified",
            Some(false) => "falsified",
            None => "input error",
        };
        out.push_str(&format!("verdict: {v}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_verdicts() {
        let mut r = Report::new("check", json!({}));
        assert_eq!(r.exit_code(), 0);
        r.results.push(FileResult {
            file: "a".into(),
            verdict: false,
            predicate: "p".into(),
            details: Value::Null,
            lines: vec![],
        });
        assert_eq!(r.exit_code(), 1);
        r.error = Some(ErrorInfo::from_error(&Error::Parse { line: 2, column: 3, message: "x".into() }, Some("a")));
        assert_eq!(r.exit_code(), 2);
        let j = r.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["error"]["kind"], "Parse");
        assert_eq!(j["error"]["line"], 2);
    }

    #[test]
    fn digest_depends_on_inputs() {
        let mut a = Report::new("check", json!({"seed": 0}));
        a.add_input("f", b"x");
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.inputs[0].sha256 = sha256_hex(b"y");
        assert_ne!(a.digest(), b.digest());
    }
}
