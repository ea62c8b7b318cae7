use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Machine-readable wrapper around every command's output.
#[derive(Debug, Serialize)]
pub struct OutputEnvelope {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs_echo: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl OutputEnvelope {
    pub fn new(
        command: &'static str,
        inputs_echo: Value,
        results: Value,
        warnings: Vec<String>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            inputs_echo,
            results,
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}
