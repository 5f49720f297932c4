//! Artifact directories: data files plus exactly one manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::Command;

pub const MANIFEST: &str = "manifest.json";
pub const MANIFEST_SCHEMA_ID: &str = "https://fraglab.dev/schema/manifest-1.json";
/// JSON Schema every manifest validates against.
pub const MANIFEST_SCHEMA: &str = include_str!("../schema/manifest.schema.json");

pub struct Artifact {
    dir: PathBuf,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    #[serde(rename = "$schema")]
    schema: &'a str,
    command: Command,
    engine_version: &'a str,
    seed: u64,
    config: &'a RunConfig,
    outputs: &'a [String],
    wall_time_s: f64,
}

impl Artifact {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_string());
        self.dir.join(name)
    }

    pub fn csv(&mut self, name: &str) -> Result<csv::Writer<File>, CliError> {
        Ok(csv::Writer::from_path(self.path(name))?)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut w = BufWriter::new(File::create(self.path(name))?);
        serde_json::to_writer_pretty(&mut w, value)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub fn writer(&mut self, name: &str) -> Result<BufWriter<File>, CliError> {
        Ok(BufWriter::new(File::create(self.path(name))?))
    }

    /// Writes the manifest; the wall time lives only here so data files
    /// stay byte-identical between reruns.
    pub fn finish(mut self, command: Command, cfg: &RunConfig, elapsed: Duration) -> Result<PathBuf, CliError> {
        self.outputs.sort();
        let m = Manifest {
            schema: MANIFEST_SCHEMA_ID,
            command,
            engine_version: fraglab::VERSION,
            seed: cfg.seed,
            config: cfg,
            outputs: &self.outputs,
            wall_time_s: elapsed.as_secs_f64(),
        };
        let path = self.dir.join(MANIFEST);
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, &m)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(path)
    }
}
