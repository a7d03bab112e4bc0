//! Report assembly: every command emits an aligned text table on stdout
//! and a JSON record carrying the tool version, the seed, and the full
//! configuration echo. Numeric values pass through serde_json's shortest
//! round-trip formatting, so the JSON value equals the library value bit
//! for bit.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use tfcert_core::Certificate64;

use crate::config::RunConfig;
use crate::CliError;

pub const TOOL: &str = "tfcert";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The shared envelope of every JSON report.
pub fn envelope(command: &str, cfg: &RunConfig) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "seed": cfg.seed,
        "config": cfg.echo(),
    })
}

/// Two-column aligned text table with the standard header lines.
pub struct TextTable {
    rows: Vec<(String, String)>,
}

impl TextTable {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        let mut t = Self { rows: Vec::new() };
        t.row("tool", format!("{TOOL} {VERSION}"));
        t.row("command", command.to_string());
        t.row("seed", cfg.seed.to_string());
        t.row("config", cfg.echo().to_string());
        t
    }

    pub fn row(&mut self, key: &str, value: String) {
        self.rows.push((key.to_string(), value));
    }

    pub fn print(&self) {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.rows {
            println!("{k:width$}  {v}");
        }
    }
}

/// JSON shape of a certificate, ingredient order preserved.
pub fn certificate_json(cert: &Certificate64) -> Value {
    json!({
        "space_pair": cert.space_pair,
        "bound": cert.bound,
        "method": cert.method,
        "ingredients": cert.ingredients.iter()
            .map(|(name, v)| json!({"name": name, "value": v}))
            .collect::<Vec<_>>(),
        "bounded": cert.bounded,
    })
}

/// Writes the JSON record to the output path, or prints it when no path
/// was configured.
pub fn emit_json(report: &Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Validation(format!("report serialization: {e}")))?;
    match output {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
