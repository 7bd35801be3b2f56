use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Extension of scenario files.
pub const EXTENSION: &str = "cfg";

pub fn default_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub description: String,
    pub path: PathBuf,
}

#[derive(Deserialize)]
struct Header {
    name: String,
    #[serde(default)]
    description: String,
}

/// Scenario files in `dir`, sorted by name. Unparseable files are listed
/// with the parse error as their description.
pub fn list(dir: &Path) -> Result<Vec<Entry>, CliError> {
    let read = fs::read_dir(dir).map_err(|e| CliError::Usage(format!("cannot list {}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in read.flatten() {
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
            continue;
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let text = fs::read_to_string(&path).unwrap_or_default();
        let item = match toml::from_str::<Header>(&text) {
            Ok(h) => Entry {
                name: h.name,
                description: h.description,
                path,
            },
            Err(e) => Entry {
                name: stem,
                description: format!("invalid config: {}", e.message()),
                path,
            },
        };
        out.push(item);
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// `arg` itself when it exists, else the bundled `<arg>.cfg`.
pub fn resolve(arg: &Path, dir: &Path) -> Result<PathBuf, CliError> {
    if arg.exists() {
        return Ok(arg.to_path_buf());
    }
    let bundled = dir.join(arg).with_extension(EXTENSION);
    if arg.components().count() == 1 && bundled.exists() {
        return Ok(bundled);
    }
    Err(CliError::Usage(format!("no config file or bundled scenario named {}", arg.display())))
}
