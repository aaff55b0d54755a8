use serde::Serialize;
use serde_json::{Map, Value};

use hypgrowth::ConstantsLedger;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Ledger {
    #[serde(flatten)]
    pub constants: ConstantsLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_n: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub shards: usize,
    pub wall_ms: u64,
}

/// One JSON line. `runtime` is the only field that may differ between runs of the
/// same configuration.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub ledger: Ledger,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub payload: Value,
    pub version: String,
    pub runtime: Runtime,
}

impl ResultRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialise")
    }
}

/// The record without its `runtime` field, for determinism comparisons.
pub fn strip_runtime(line: &str) -> Option<String> {
    let mut v: Map<String, Value> = serde_json::from_str(line).ok()?;
    v.remove("runtime");
    serde_json::to_string(&v).ok()
}
