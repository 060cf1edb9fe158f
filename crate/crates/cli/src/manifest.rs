use serde::Serialize;

/// Provenance block embedded in every report.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub instance_digest: Option<String>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &'static str, config: &impl Serialize, seed: Option<u64>, digest: Option<String>) -> Self {
        Self {
            command,
            config: serde_json::to_value(config).expect("arguments serialize"),
            seed,
            instance_digest: digest,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: None,
        }
    }
}
