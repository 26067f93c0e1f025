//! Certificate rendering and the exit-code policy.

use std::fmt::Write as _;
use std::path::Path;

use qca_forge::{Certificate, Error, Status};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;

/// A file read for a command, with its digest for the certificate header.
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn new(path: &Path, bytes: &[u8]) -> Input {
        let digest = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in digest {
            write!(hex, "{b:02x}").expect("writing to a String");
        }
        Input { path: path.display().to_string(), sha256: hex }
    }
}

/// FAIL wins over UNSUPPORTED; skips count as passes.
pub fn exit_code(cert: &Certificate) -> u8 {
    if cert.count(Status::Fail) > 0 {
        EXIT_FAIL
    } else if cert.has_unsupported() {
        EXIT_UNSUPPORTED
    } else {
        EXIT_PASS
    }
}

/// Exit code for an error raised outside any check.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) | Error::Unsupported(_) => EXIT_UNSUPPORTED,
        Error::Parse(_) | Error::Malformed(_) | Error::Shape(_) | Error::Context(_) => EXIT_MALFORMED,
        _ => EXIT_FAIL,
    }
}

/// The deterministic part comes first; `timing` holds the only run-dependent values.
pub fn to_json(cert: &Certificate, command: &str, inputs: &[Input], timing: bool) -> Value {
    let checks: Vec<Value> = cert
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "status": c.status.to_string(), "detail": c.detail }))
        .collect();
    let mut doc = json!({
        "schema": SCHEMA,
        "tool": { "name": "qca-forge", "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "inputs": inputs.iter().map(|i| json!({ "path": i.path, "sha256": i.sha256 })).collect::<Vec<_>>(),
        "title": cert.title,
        "checks": checks,
        "summary": {
            "pass": cert.count(Status::Pass),
            "fail": cert.count(Status::Fail),
            "skip": cert.count(Status::Skip),
            "unsupported": cert.count(Status::Unsupported),
            "exit_code": exit_code(cert),
        },
    });
    if timing {
        let ms: Vec<Value> =
            cert.checks.iter().map(|c| json!({ "name": c.name, "elapsed_ms": c.elapsed.as_secs_f64() * 1e3 })).collect();
        doc["timing"] = json!({ "checks": ms });
    }
    doc
}

pub fn summary_line(cert: &Certificate) -> String {
    format!(
        "{} passed, {} failed, {} skipped, {} unsupported",
        cert.count(Status::Pass),
        cert.count(Status::Fail),
        cert.count(Status::Skip),
        cert.count(Status::Unsupported)
    )
}
