//! Run manifests and file output. Every command leaves a manifest next
//! to its data file recording the resolved configuration, the RNG
//! scheme, wall time, and a config fingerprint, so any output can be
//! reproduced from its manifest alone.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::config::Resolved;
use crate::CliResult;

/// 64-bit FNV-1a, the workspace convention for config fingerprints.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub struct RunReport {
    started: Instant,
    command: &'static str,
    config: Map<String, Value>,
    outputs: Vec<String>,
    notes: Map<String, Value>,
}

impl RunReport {
    pub fn new(command: &'static str, resolved: &Resolved) -> Self {
        let mut config = Map::new();
        config.insert("ntx".into(), json!(resolved.n_t));
        config.insert("nrx".into(), json!(resolved.n_r));
        config.insert("kd".into(), json!(resolved.kd));
        config.insert("kd_source".into(), json!(resolved.kd_source));
        config.insert("axis".into(), json!(resolved.axis_name()));
        config.insert("snr_db".into(), json!(resolved.snr_db));
        config.insert("trials".into(), json!(resolved.trials));
        config.insert("seed".into(), json!(resolved.seed));
        config.insert("workers".into(), json!(resolved.workers));
        RunReport {
            started: Instant::now(),
            command,
            config,
            outputs: Vec::new(),
            notes: Map::new(),
        }
    }

    /// Command-specific parameter that shapes the output (grids,
    /// method lists, sweep cells). Included in the config fingerprint.
    pub fn set_param(&mut self, key: &str, value: Value) {
        self.config.insert(key.into(), value);
    }

    /// Derived observation worth recording (for example the largest
    /// gap between a Gaussian and an empirical curve). Not part of the
    /// config fingerprint.
    pub fn note(&mut self, key: &str, value: Value) {
        self.notes.insert(key.into(), value);
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Write `<data_out>.manifest.json`. The fingerprint excludes
    /// `workers`: thread count never changes results.
    pub fn write(mut self, data_out: &Path) -> CliResult<()> {
        let mut fingerprint = self.config.clone();
        fingerprint.remove("workers");
        let digest = fnv1a(
            serde_json::to_string(&Value::Object(fingerprint))
                .expect("config serializes")
                .as_bytes(),
        );
        let wall_time_ms = self.started.elapsed().as_millis() as u64;
        let mut manifest = Map::new();
        manifest.insert("tool".into(), json!("losmimo-cli"));
        manifest.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        manifest.insert("command".into(), json!(self.command));
        manifest.insert("rng".into(), json!(losmimo::RNG_IDENTIFIER));
        manifest.insert("config".into(), Value::Object(self.config));
        manifest.insert("config_digest".into(), json!(format!("{digest:016x}")));
        manifest.insert("outputs".into(), json!(self.outputs));
        manifest.insert("wall_time_ms".into(), json!(wall_time_ms));
        if !self.notes.is_empty() {
            manifest.insert("notes".into(), Value::Object(std::mem::take(&mut self.notes)));
        }
        let path = manifest_path(data_out);
        write_json(Path::new(&path), &Value::Object(manifest))
    }
}

pub fn manifest_path(data_out: &Path) -> String {
    format!("{}.manifest.json", data_out.display())
}

/// Pretty JSON with a trailing newline. serde_json maps serialize with
/// sorted keys, so output is byte-deterministic.
pub fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Raw text written as-is: callers build LF-terminated CSV bytes.
pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)?;
    Ok(())
}
