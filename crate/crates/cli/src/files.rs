use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use aauv::{CoefficientVector, MomentOrder, Sample};

use crate::error::{CliError, CliResult};

/// On-disk coefficient file: a single JSON document with exactly the keys
/// `n`, `order`, `c`, `provenance`. Weights round-trip bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub n: usize,
    pub order: u8,
    pub c: Vec<f64>,
    pub provenance: String,
}

impl CoefficientFile {
    pub fn from_vector(c: &CoefficientVector, provenance: impl Into<String>) -> Self {
        Self {
            n: c.len(),
            order: c.order().as_u8(),
            c: c.weights().to_vec(),
            provenance: provenance.into(),
        }
    }

    pub fn to_vector(&self) -> CliResult<CoefficientVector> {
        let order = MomentOrder::from_u8(self.order).ok_or_else(|| {
            CliError::Usage(format!(
                "coefficient file order must be 2 or 3, got {}",
                self.order
            ))
        })?;
        if self.c.len() != self.n {
            return Err(CliError::Usage(format!(
                "coefficient file declares n = {} but carries {} weights",
                self.n,
                self.c.len()
            )));
        }
        CoefficientVector::new(self.c.clone(), order).map_err(CliError::from)
    }
}

pub fn read_coefficient_file(path: &Path) -> CliResult<CoefficientFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_coefficient_file(path: &Path, file: &CoefficientFile) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(file).expect("coefficient file serializes");
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Reads a data file: one decimal per line, blank lines ignored, any
/// parse failure aborts with the offending line number.
pub fn read_data_file(path: &Path) -> CliResult<Sample> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| {
            CliError::Usage(format!(
                "{}:{}: invalid number `{trimmed}`",
                path.display(),
                index + 1
            ))
        })?;
        values.push(value);
    }
    Sample::new(values).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn sha256_hex(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
