//! Output plumbing: config hashing, metadata headers and file emission.
//!
//! CSV files start with one `#` line naming the tool versions, the command
//! and the SHA-256 of the effective configuration. JSON documents carry the
//! same fields in a `meta` object next to `result`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub cli_version: &'static str,
    pub core_version: &'static str,
    pub config_sha256: String,
}

impl Meta {
    /// Hashes the canonical JSON of the command, its arguments and the
    /// effective configuration.
    pub fn new(command: &str, effective: &Value) -> Self {
        let canonical = serde_json::to_string(effective).expect("JSON values serialize");
        let digest = Sha256::digest(canonical.as_bytes());
        Meta {
            command: command.to_string(),
            cli_version: env!("CARGO_PKG_VERSION"),
            core_version: clarklab::VERSION,
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }

    fn csv_header(&self) -> String {
        format!(
            "# clarklab-cli {} clarklab {} command={} config_sha256={}\n",
            self.cli_version, self.core_version, self.command, self.config_sha256
        )
    }
}

/// Result of one command: a JSON document and named CSV tables.
pub struct Artifact {
    pub json: Value,
    pub tables: Vec<(String, String)>,
}

impl Artifact {
    pub fn new(result: impl Serialize) -> Result<Self, CliError> {
        let json =
            serde_json::to_value(result).map_err(|e| CliError::Usage(format!("cannot serialize result: {e}")))?;
        Ok(Artifact { json, tables: Vec::new() })
    }

    pub fn table(mut self, name: &str, csv: String) -> Self {
        self.tables.push((name.to_string(), csv));
        self
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Writes `<command>.json` and the tables into `out`, or prints to stdout.
pub fn emit(meta: &Meta, artifact: &Artifact, format: Format, out: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let document = json!({ "meta": meta, "result": artifact.json });
    let pretty = serde_json::to_string_pretty(&document).expect("JSON values serialize") + "\n";
    let want_json = matches!(format, Format::Json | Format::Both);
    let want_csv = matches!(format, Format::Csv | Format::Both);
    let Some(dir) = out else {
        if format == Format::Both {
            return Err(CliError::Usage("--format both needs --out".into()));
        }
        let mut stdout = std::io::stdout().lock();
        let mut text = String::new();
        if want_json {
            text.push_str(&pretty);
        } else {
            if artifact.tables.is_empty() {
                return Err(CliError::Usage(format!("{} has no CSV form", meta.command)));
            }
            for (i, (_, csv)) in artifact.tables.iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                text.push_str(&meta.csv_header());
                text.push_str(csv);
            }
        }
        stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })?;
        return Ok(Vec::new());
    };
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    if want_json {
        let path = dir.join(format!("{}.json", meta.command));
        write_file(&path, &pretty)?;
        written.push(path);
    }
    if want_csv {
        for (name, csv) in &artifact.tables {
            let path = dir.join(format!("{name}.csv"));
            write_file(&path, &(meta.csv_header() + csv))?;
            written.push(path);
        }
    }
    Ok(written)
}
