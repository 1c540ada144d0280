use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::Failure;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            name: name.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Serialize)]
struct OutputDigest<'a> {
    name: &'a str,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a Command,
    inputs: &'a [InputDigest],
    outputs: Vec<OutputDigest<'a>>,
}

/// Files produced by one command. The first file is the one printed to
/// stdout when no output directory is given.
#[derive(Default)]
pub struct Outputs {
    pub inputs: Vec<InputDigest>,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, content: impl Into<Vec<u8>>) {
        self.files.push((name.into(), content.into()));
    }

    pub fn emit(&self, command: &Command, out_dir: Option<&Path>) -> Result<(), Failure> {
        let Some(dir) = out_dir else {
            if let Some((_, bytes)) = self.files.first() {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
            return Ok(());
        };
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, bytes)?;
        }
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: command,
            inputs: &self.inputs,
            outputs: self
                .files
                .iter()
                .map(|(name, bytes)| OutputDigest {
                    name,
                    sha256: sha256_hex(bytes),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
        text.push('\n');
        fs::create_dir_all(dir)?;
        fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }
}
