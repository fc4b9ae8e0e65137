//! Output directory handling and the per-run manifest.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{Map, Value};

use ckdv::output;

use crate::CliError;

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    tool_version: &'static str,
    status: &'a str,
    exit_code: i32,
    parameters: &'a Map<String, Value>,
    outputs: &'a [String],
    verdicts: &'a Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Collects outputs and verdicts, then writes `<runid>_manifest.json`.
pub struct Run {
    pub command: &'static str,
    pub outdir: PathBuf,
    pub run_id: String,
    pub parameters: Map<String, Value>,
    pub verdicts: Map<String, Value>,
    outputs: Vec<String>,
}

impl Run {
    pub fn new(command: &'static str, outdir: PathBuf, run_id: Option<String>) -> Self {
        Run {
            command,
            outdir,
            run_id: run_id.unwrap_or_else(|| command.to_string()),
            parameters: Map::new(),
            verdicts: Map::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) {
        self.verdicts
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn csv(&mut self, name: String, columns: &[(&str, &[f64])]) -> Result<(), CliError> {
        output::write_csv(&self.outdir.join(&name), columns)?;
        self.outputs.push(name);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, suffix: &str, value: &T) -> Result<(), CliError> {
        let name = format!("{}_{suffix}.json", self.run_id);
        output::write_json(&self.outdir.join(&name), value)?;
        self.outputs.push(name);
        Ok(())
    }

    pub fn text(&mut self, suffix: &str, body: &str) -> Result<(), CliError> {
        let name = format!("{}_{suffix}.txt", self.run_id);
        output::write_atomic(&self.outdir.join(&name), body.as_bytes())?;
        self.outputs.push(name);
        Ok(())
    }

    /// Writes the manifest; its absence marks an abnormal termination.
    pub fn finish(&self, exit_code: i32, error: Option<&CliError>) -> Result<(), CliError> {
        let status = match exit_code {
            0 => "ok",
            1 => "verification_failed",
            3 => "singular",
            4 => "blow_up",
            _ => "error",
        };
        let m = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION"),
            status,
            exit_code,
            parameters: &self.parameters,
            outputs: &self.outputs,
            verdicts: &self.verdicts,
            error: error.map(|e| e.to_string()),
        };
        output::write_json(&self.outdir.join(output::manifest_name(&self.run_id)), &m)?;
        Ok(())
    }
}
