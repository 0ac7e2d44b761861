use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const FILE_NAME: &str = "manifest.json";

/// Record of one invocation; `argv` replays it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub inputs: Vec<PathBuf>,
    pub parameters: Value,
    pub version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
    pub exit_status: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

pub fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, parameters: Value) -> Self {
        Self {
            command: command.to_string(),
            argv,
            inputs: Vec::new(),
            parameters,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            outputs: Vec::new(),
            exit_status: 0,
            error: None,
        }
    }

    pub fn finish(&mut self, result: &Result<(), CliError>) {
        match result {
            Ok(()) => self.exit_status = 0,
            Err(e) => {
                self.exit_status = e.exit_code;
                self.error = serde_json::to_value(e).ok();
            }
        }
    }
}
