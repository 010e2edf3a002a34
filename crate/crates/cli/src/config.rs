//! Parameter resolution: command-line flags override the JSON config
//! file, which overrides built-in defaults.

use std::path::Path;

use serde::Deserialize;

use crate::{CliError, CliResult, CommonArgs};

/// Optional JSON config file. Unknown keys are rejected so a typo
/// cannot silently fall back to a default.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    ntx: Option<usize>,
    nrx: Option<usize>,
    kd: Option<f64>,
    axis: Option<String>,
    snr_db: Option<f64>,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
}

/// Fully resolved run parameters, plus where kd came from so reports
/// can say whether the spacing was chosen or defaulted.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub n_t: usize,
    pub n_r: usize,
    pub kd: f64,
    pub kd_source: &'static str,
    pub axis: losmimo::Axis,
    pub snr_db: f64,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Resolved {
    pub fn axis_name(&self) -> &'static str {
        match self.axis {
            losmimo::Axis::Y => "y",
            losmimo::Axis::Z => "z",
        }
    }
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

fn parse_axis(s: &str) -> CliResult<losmimo::Axis> {
    match s {
        "y" | "Y" => Ok(losmimo::Axis::Y),
        "z" | "Z" => Ok(losmimo::Axis::Z),
        other => {
            Err(CliError::Usage(format!("bad axis {other:?} in config: expected \"y\" or \"z\"")))
        }
    }
}

pub fn resolve(common: &CommonArgs) -> CliResult<Resolved> {
    let file = match &common.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let n_t = common
        .ntx
        .or(file.ntx)
        .ok_or_else(|| CliError::Usage("missing --ntx (or \"ntx\" in the config file)".into()))?;
    let n_r = common
        .nrx
        .or(file.nrx)
        .ok_or_else(|| CliError::Usage("missing --nrx (or \"nrx\" in the config file)".into()))?;

    let (kd, kd_source) = match (common.kd, file.kd) {
        (Some(v), _) => (v, "flag"),
        (None, Some(v)) => (v, "config"),
        (None, None) => (std::f64::consts::PI, "default"),
    };

    let axis = match (common.axis, &file.axis) {
        (Some(a), _) => a.into(),
        (None, Some(s)) => parse_axis(s)?,
        (None, None) => losmimo::Axis::Y,
    };

    Ok(Resolved {
        n_t,
        n_r,
        kd,
        kd_source,
        axis,
        snr_db: common.snr_db.or(file.snr_db).unwrap_or(10.0),
        trials: common.trials.or(file.trials).unwrap_or(100_000),
        seed: common.seed.or(file.seed).unwrap_or(42),
        workers: common.workers.or(file.workers).unwrap_or(1),
    })
}
