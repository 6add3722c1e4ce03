//! Provenance: the header written at the top of every output file and the
//! `manifest.json` of a run. Nothing here depends on the clock, so the same
//! inputs give byte-identical outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const CLI_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        write!(s, "{b:02x}").expect("writing to a String");
    }
    s
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    Ok(sha256_hex(&bytes))
}

/// What every output file records about the run that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub isa_cli: String,
    pub isa_core: String,
}

impl Provenance {
    pub fn new(command: &str, canonical_config: &str, seed: u64) -> Self {
        Self {
            command: command.into(),
            config_hash: format!("sha256:{}", sha256_hex(canonical_config.as_bytes())),
            seed,
            isa_cli: CLI_VERSION.into(),
            isa_core: isa_core::VERSION.into(),
        }
    }

    /// Header lines (without the comment marker).
    pub fn header(&self) -> Vec<String> {
        vec![
            format!("isa-cli {} isa-core {}", self.isa_cli, self.isa_core),
            format!("command {}", self.command),
            format!("config_hash {}", self.config_hash),
            format!("seed {}", self.seed),
        ]
    }

    pub fn header_with(&self, extra: impl IntoIterator<Item = String>) -> Vec<String> {
        let mut h = self.header();
        h.extend(extra);
        h
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

impl InputFile {
    pub fn hashed(role: &str, path: &Path) -> CliResult<Self> {
        Ok(Self {
            role: role.into(),
            path: path.to_path_buf(),
            sha256: sha256_file(path)?,
        })
    }
}

/// Corpus and model dimensions of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Counts {
    /// documents
    pub n: usize,
    pub coded: usize,
    pub uncoded: usize,
    /// distinct stem patterns
    pub k: usize,
    /// stems
    pub l: usize,
    /// categories besides D0
    pub m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub config: serde_json::Value,
    pub inputs: Vec<InputFile>,
    pub counts: Counts,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_file(&dir.join("manifest.json"), text.as_bytes())
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Renders into memory with one of the core `write_*` functions.
pub fn render(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    buf
}
