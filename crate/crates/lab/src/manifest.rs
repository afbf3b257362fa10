//! Machine-readable record of one CLI run.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub row: usize,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub subcommand: String,
    pub task: String,
    pub grid: Option<String>,
    pub seed: u64,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    pub output: Option<String>,
    pub settings: serde_json::Map<String, serde_json::Value>,
    pub points: Vec<PointRecord>,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest is plain data")
    }
}
