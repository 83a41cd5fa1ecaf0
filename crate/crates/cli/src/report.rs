//! Report envelope, config hashing and all-or-nothing file output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "tropfm";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub config_hash: String,
    pub result: Value,
}

/// SHA-256 of the compact JSON form of the config.
pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("json values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A report read back from disk.
#[derive(Clone, Debug, Deserialize)]
pub struct ReportIn {
    pub tool: String,
    pub command: String,
    pub config: Value,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, config: Value, result: impl Serialize) -> Report {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            config_hash: config_hash(&config),
            config,
            result: serde_json::to_value(result).expect("results serialize"),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Writes `text` to `out`, or stdout. Files go through a temporary sibling
/// and a rename so a failed run leaves nothing behind.
pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        None => {
            let mut so = io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()
        }
        Some(p) => {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let tmp = p.with_file_name(format!(".{name}.partial"));
            fs::write(&tmp, text)?;
            fs::rename(&tmp, p).inspect_err(|_| {
                let _ = fs::remove_file(&tmp);
            })
        }
    }
}
