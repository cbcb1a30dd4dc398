use std::collections::BTreeMap;
use std::path::Path;

use residue_forge::Error;
use serde::{Deserialize, Serialize};

use crate::CliResult;

/// Everything needed to rerun a command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub sieve_limit: Option<u64>,
    pub threads: usize,
    pub seed: u64,
    pub output: Option<String>,
    pub version: String,
    pub wall_time_secs: f64,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|e| Error::resource(format!("writing {}", path.display()), e).into())
    }
}

/// Parameter map from a subcommand's argument struct.
pub fn params<T: Serialize>(args: &T) -> BTreeMap<String, serde_json::Value> {
    match serde_json::to_value(args) {
        Ok(serde_json::Value::Object(m)) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}
