//! Run manifests: every command records its resolved inputs and outputs.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Digest of the resolved inputs; identical inputs give identical runs.
    pub config_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    pub wall_time_secs: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, inputs: &[(&str, String)]) -> Self {
        RunManifest {
            command: command.to_string(),
            config_digest: digest_inputs(command, inputs),
            scheme: None,
            checkpoint_id: None,
            grid: None,
            t_final: None,
            wall_time_secs: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, out_dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(out_dir)?;
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(out_dir.join("run_manifest.json"), json)
    }
}

/// Canonical digest over `command` and sorted `key=value` lines.
pub fn digest_inputs(command: &str, inputs: &[(&str, String)]) -> String {
    let mut lines: Vec<String> = inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    lines.sort();
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    for line in lines {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_order_independent_and_input_sensitive() {
        let a = digest_inputs("run", &[("nx", "200".into()), ("scheme", "weno5-z".into())]);
        let b = digest_inputs("run", &[("scheme", "weno5-z".into()), ("nx", "200".into())]);
        assert_eq!(a, b);
        let c = digest_inputs("run", &[("nx", "201".into()), ("scheme", "weno5-z".into())]);
        assert_ne!(a, c);
    }
}
