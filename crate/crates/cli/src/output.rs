//! Output directory, CSV emission and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct OutDir {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutDir {
    pub fn create(dir: &Path, command: &str, seed: u64) -> Result<OutDir, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("--out {}: {e}", dir.display())))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                command: command.to_string(),
                inputs: BTreeMap::new(),
                parameters: BTreeMap::new(),
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: String::new(),
                outputs: BTreeMap::new(),
            },
        })
    }

    /// Reads an input file named by `flag`, recording its digest.
    pub fn read_input(&mut self, flag: &str, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("{flag} {}: {e}", path.display())))?;
        self.manifest.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{flag} {}: not valid UTF-8", path.display())))
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.manifest.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Compute(format!("writing {}: {e}", path.display())))?;
        self.manifest.outputs.insert(name.to_string(), sha256_hex(contents));
        log::info!("wrote {}", path.display());
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Compute(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Compute(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
        self.write(name, &bytes)
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.manifest.timestamp = chrono::Utc::now().to_rfc3339();
        let name = format!("{}.manifest.json", self.manifest.command);
        let json = serde_json::to_string_pretty(&self.manifest).map_err(|e| CliError::Compute(e.to_string()))?;
        let path = self.dir.join(&name);
        fs::write(&path, json + "\n").map_err(|e| CliError::Compute(format!("writing {}: {e}", path.display())))?;
        Ok(path)
    }
}
