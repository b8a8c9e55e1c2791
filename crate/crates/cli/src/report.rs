//! Run reports: one JSON document per invocation, stable across identical
//! runs except for the timing field. Every matrix the report mentions is
//! hashed, and every constructed matrix is re-verified before the report
//! claims ok.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct InputRef {
    pub name: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct OutputRef {
    pub path: String,
    pub kind: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub inputs: Vec<InputRef>,
    pub outputs: Vec<OutputRef>,
    pub measured: BTreeMap<String, i64>,
    pub verification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            command,
            inputs: Vec::new(),
            outputs: Vec::new(),
            measured: BTreeMap::new(),
            verification: "ok".to_string(),
            extra: None,
            elapsed_ms: 0,
        }
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(data);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
