use std::path::Path;

use serde::Serialize;

use super::IoError;
use crate::dpll::SearchStats;

/// One solver run, serialized with a fixed field order. `value` is a string
/// so large integers survive JSON readers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub algo: String,
    pub policy: String,
    pub value: String,
    pub decisions: u64,
    pub up_propagations: u64,
    pub cache_hits: u64,
    pub cache_stores: u64,
    pub cache_peak: u64,
    pub components_created: u64,
    pub conflicts: u64,
    pub wall_ms: u64,
}

impl RunReport {
    pub fn new(instance: &str, algo: &str, policy: &str, value: String, stats: &SearchStats, wall_ms: u64) -> Self {
        RunReport {
            instance: instance.to_string(),
            algo: algo.to_string(),
            policy: policy.to_string(),
            value,
            decisions: stats.decisions,
            up_propagations: stats.up_propagations,
            cache_hits: stats.cache_hits,
            cache_stores: stats.cache_stores,
            cache_peak: stats.cache_peak,
            components_created: stats.components_created,
            conflicts: stats.conflicts,
            wall_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Writes the report as one JSON object followed by a newline.
pub fn emit_stats(report: &RunReport, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, report.to_json() + "\n")?;
    Ok(())
}
