//! Run manifests: one `manifest.json` per output directory recording the
//! resolved configuration, input digests, seed, artifact version, and
//! timestamp — everything needed to reproduce the run from the referenced
//! inputs. The timestamp is the only field that varies between reruns;
//! result CSVs are byte-reproducible.

use std::fs;
use std::io::Read;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::errors::{CliError, CliResult};

pub fn now_rfc3339() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// SHA-256 of a file, lowercase hex. Read failures are input errors: a
/// digest is only requested for files the command was pointed at.
pub fn sha256_hex(path: &Path) -> CliResult<String> {
    let mut file =
        fs::File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file
            .read(&mut buf)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

/// `{"path": ..., "sha256": ...}` for one referenced input file.
pub fn input_entry(path: &Path) -> CliResult<Value> {
    Ok(json!({
        "path": path.display().to_string(),
        "sha256": sha256_hex(path)?,
    }))
}

/// Writes `manifest.json` (pretty-printed) into `dir`.
pub fn write_manifest(dir: &Path, manifest: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Runtime(format!("manifest serialization: {e}")))?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(())
}

/// Creates the output directory (and parents) if absent.
pub fn ensure_out_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}
