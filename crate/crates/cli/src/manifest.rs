//! Every command that writes artifacts drops a manifest beside them
//! listing what was produced and the seed, so runs are reproducible.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub outputs: Vec<String>,
}

pub struct OutputDir {
    dir: PathBuf,
    manifest: Manifest,
}

impl OutputDir {
    pub fn create(dir: &Path, command: &str, seed: u64) -> anyhow::Result<OutputDir> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            manifest: Manifest {
                command: command.to_string(),
                seed,
                outputs: Vec::new(),
            },
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        self.manifest.outputs.sort();
        let body = serde_json::to_string_pretty(&self.manifest)?;
        std::fs::write(self.dir.join("manifest.json"), body + "\n")
            .with_context(|| format!("writing manifest in {}", self.dir.display()))?;
        Ok(())
    }
}
