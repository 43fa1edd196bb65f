//! Report envelope, run manifest and exit codes.

use std::time::Instant;

use curvcone::{Error, SolverConfig};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Format, GlobalArgs};

pub const SCHEMA: &str = "curvcone.report.v1";

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
/// Bad flags, unsupported option combinations and malformed JSON.
pub const EXIT_USAGE: u8 = 64;
/// Well-formed input that the library rejects.
pub const EXIT_INPUT: u8 = 65;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(j) => Failure::usage(format!("malformed JSON at line {}, column {}: {j}", j.line(), j.column())),
            Error::UnsupportedFrame(_) => Failure::usage(e.to_string()),
            other => Failure::input(other.to_string()),
        }
    }
}

pub struct Outcome {
    pub text: String,
    pub code: u8,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything that determines a report, plus the wall time.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub config: SolverConfig,
    pub tool_version: String,
    pub rng_seed: u64,
    pub wall_time_seconds: f64,
}

pub struct Context {
    command: &'static str,
    args: Vec<String>,
    config: SolverConfig,
    start: Instant,
    inputs: Vec<InputDigest>,
    format: Option<Format>,
}

impl Context {
    pub fn new(command: &'static str, global: &GlobalArgs, config: SolverConfig, start: Instant) -> Self {
        Self { command, args: std::env::args().skip(1).collect(), config, start, inputs: Vec::new(), format: global.format }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn record_input(&mut self, source: impl Into<String>, bytes: &[u8]) {
        self.inputs.push(InputDigest { source: source.into(), sha256: sha256_hex(bytes) });
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn manifest(&self) -> RunManifest {
        RunManifest {
            command: self.command.to_string(),
            args: self.args.clone(),
            inputs: self.inputs.clone(),
            config: self.config.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng_seed: self.config.rng_seed,
            wall_time_seconds: self.start.elapsed().as_secs_f64(),
        }
    }

    pub fn json(&self, result: Value, code: u8) -> Outcome {
        let doc = json!({ "schema": SCHEMA, "manifest": self.manifest(), "result": result });
        let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
        text.push('\n');
        Outcome { text, code }
    }

    /// CSV body preceded by `#` comment lines carrying the manifest.
    pub fn csv(&self, notes: &[(&str, String)], header: &[&str], rows: &[Vec<String>], code: u8) -> Outcome {
        let mut manifest = serde_json::to_value(self.manifest()).expect("manifest serializes");
        let wall = manifest.as_object_mut().and_then(|m| m.remove("wall_time_seconds")).unwrap_or(Value::Null);
        let mut text = format!("# schema: {SCHEMA}\n# manifest: {manifest}\n");
        for (k, v) in notes {
            text.push_str(&format!("# {k}: {v}\n"));
        }
        text.push_str(&header.join(","));
        text.push('\n');
        for r in rows {
            text.push_str(&r.join(","));
            text.push('\n');
        }
        text.push_str(&format!("# wall_time_seconds: {wall}\n"));
        Outcome { text, code }
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}
