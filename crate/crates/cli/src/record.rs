use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::files::sha256_hex;

/// Audit record written under `--out`: the exact command line, SHA-256
/// digests of every input file, the seed when one was used, a timestamp,
/// and the same outputs the command printed.
///
/// The timestamp lives only here; the `--json` stream on stdout stays
/// bit-reproducible for fixed inputs and seed.
#[derive(Debug, Serialize)]
pub struct ResultRecord {
    pub command: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub timestamp: String,
    pub outputs: serde_json::Value,
}

pub fn write_record(
    out: &Path,
    inputs: &[&Path],
    seed: Option<u64>,
    outputs: &impl Serialize,
) -> CliResult<()> {
    let mut digests = BTreeMap::new();
    for path in inputs {
        digests.insert(path.display().to_string(), sha256_hex(path)?);
    }
    let record = ResultRecord {
        command: std::env::args().collect(),
        inputs: digests,
        seed,
        timestamp: chrono::Utc::now().to_rfc3339(),
        outputs: serde_json::to_value(outputs).expect("outputs serialize"),
    };
    let mut text = serde_json::to_string_pretty(&record).expect("record serializes");
    text.push('\n');
    std::fs::write(out, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", out.display())))
}
