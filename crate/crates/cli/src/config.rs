//! Flat `key = value` run configuration. Command-line flags override it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use kuo_core::rayleigh_kuo::{default_eps_schedule, SolverSettings};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub resolution: usize,
    pub eps_schedule: Vec<f64>,
    /// Named tolerances (`tol.<name>` in the file); `tol` alone sets `default`.
    pub tolerances: BTreeMap<String, f64>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub plot: bool,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            resolution: 256,
            eps_schedule: default_eps_schedule(),
            tolerances: BTreeMap::new(),
            cache_dir: None,
            format: Format::Csv,
            plot: false,
            jobs: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    v.parse()
        .map_err(|_| CliError::Validation(format!("config key {key}: '{v}' is not a number")))
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Validation(format!("config key {key}: '{v}' is not a boolean"))),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("config line {}: expected key = value", i + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "resolution" => {
                    cfg.resolution = value.parse().map_err(|_| {
                        CliError::Validation(format!("config key resolution: '{value}' is not an integer"))
                    })?
                }
                "eps_schedule" => {
                    cfg.eps_schedule = value
                        .split(',')
                        .map(|v| parse_f64(key, v.trim()))
                        .collect::<CliResult<_>>()?
                }
                "tol" => {
                    cfg.tolerances.insert("default".into(), parse_f64(key, value)?);
                }
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
                "format" => {
                    cfg.format = match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(CliError::Validation(format!("config key format: '{value}'"))),
                    }
                }
                "plot" => cfg.plot = parse_bool(key, value)?,
                "jobs" => {
                    cfg.jobs = Some(value.parse().map_err(|_| {
                        CliError::Validation(format!("config key jobs: '{value}' is not an integer"))
                    })?)
                }
                _ => match key.strip_prefix("tol.") {
                    Some(name) => {
                        cfg.tolerances.insert(name.to_string(), parse_f64(key, value)?);
                    }
                    None => return Err(CliError::Validation(format!("unknown config key '{key}'"))),
                },
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.resolution < 64 {
            return Err(CliError::Validation(format!(
                "resolution must be >= 64, got {}",
                self.resolution
            )));
        }
        if let Some((name, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(CliError::Validation(format!("tolerance {name} must be > 0, got {v}")));
        }
        if self.eps_schedule.iter().any(|e| !(*e > 0.0)) {
            return Err(CliError::Validation("eps_schedule entries must be > 0".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Validation("jobs must be >= 1".into()));
        }
        Ok(())
    }

    /// Tolerance `name`, falling back to the global one and then `default`.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances
            .get(name)
            .or_else(|| self.tolerances.get("default"))
            .copied()
            .unwrap_or(default)
    }

    pub fn settings(&self) -> SolverSettings {
        SolverSettings {
            resolution: self.resolution,
            eps_schedule: self.eps_schedule.clone(),
        }
    }
}
