use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const MANIFEST_SCHEMA: &str = "chromatic.run-manifest/v1";
pub const TIMING_SCHEMA: &str = "chromatic.timing/v1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Pretty JSON with a trailing newline, the canonical form of every artifact.
pub fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s.into_bytes()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Digest256 {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub passed: bool,
}

/// What was run and what came out. Wall time lives in a sidecar so that the
/// manifest itself is a pure function of version and configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub inputs: Vec<Digest256>,
    pub outputs: Vec<Digest256>,
    pub verdicts: Vec<VerdictLine>,
    pub passed: bool,
}

#[derive(Serialize)]
struct Timing<'a> {
    schema: &'static str,
    command: &'a str,
    wall_seconds: f64,
}

/// Artifacts of one run, collected before anything is written.
#[derive(Debug)]
pub struct Run {
    pub command: String,
    pub config: RunConfig,
    pub inputs: Vec<Digest256>,
    pub artifacts: Vec<(String, Vec<u8>)>,
    pub verdicts: Vec<VerdictLine>,
    /// Printed to stdout.
    pub display: String,
}

impl Run {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Run {
            command: command.to_string(),
            config,
            inputs: Vec::new(),
            artifacts: Vec::new(),
            verdicts: Vec::new(),
            display: String::new(),
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(Digest256 {
            name: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn artifact(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.artifacts.push((name.into(), bytes));
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool) {
        self.verdicts.push(VerdictLine {
            name: name.into(),
            passed,
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            schema: MANIFEST_SCHEMA,
            tool: "chromatic",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.clone(),
            config: self.config.clone(),
            inputs: self.inputs.clone(),
            outputs: self
                .artifacts
                .iter()
                .map(|(name, bytes)| Digest256 {
                    name: name.clone(),
                    sha256: sha256_hex(bytes),
                })
                .collect(),
            verdicts: self.verdicts.clone(),
            passed: self.passed(),
        }
    }

    /// Writes the artifacts, `manifest.json` and the `timing.json` sidecar.
    pub fn write(&self, dir: &Path, elapsed: Duration) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, bytes) in &self.artifacts {
            let path = dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        }
        let manifest = dir.join("manifest.json");
        fs::write(&manifest, json_bytes(&self.manifest()))
            .with_context(|| format!("writing {}", manifest.display()))?;
        let timing = Timing {
            schema: TIMING_SCHEMA,
            command: &self.command,
            wall_seconds: elapsed.as_secs_f64(),
        };
        fs::write(dir.join("timing.json"), json_bytes(&timing))?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_hashes_artifacts_and_tracks_verdicts() {
        let mut run = Run::new("check", RunConfig::new(Some(3), "json"));
        run.artifact("a.json", b"{}\n".to_vec());
        run.verdict("x", true);
        let m = run.manifest();
        assert!(m.passed);
        assert_eq!(
            m.outputs[0].sha256,
            "ca3d163bab055381827226140568f3bef7eaac187cebd76878e0b63e9e442356"
        );
        run.verdict("y", false);
        assert!(!run.manifest().passed);
    }
}
