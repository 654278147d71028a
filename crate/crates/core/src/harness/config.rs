use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::env::NoiseModel;
use crate::error::{Error, Result};
use crate::setfn::FunctionDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Dgetc,
    Rgl,
    /// Best of repeated offline double-greedy runs with exact access, played
    /// every round. A reference point, not a bandit learner.
    DgOfflineRepeated,
}

impl AlgorithmKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlgorithmKind::Dgetc => "dgetc",
            AlgorithmKind::Rgl => "rgl",
            AlgorithmKind::DgOfflineRepeated => "dg_offline_repeated",
        }
    }
}

fn default_delta() -> f64 {
    0.05
}

fn default_replications() -> usize {
    1
}

fn default_repeats() -> usize {
    100
}

/// One experiment: a function, a noise model, an algorithm and its inputs.
///
/// ```toml
/// algorithm = "dgetc"
/// horizon = 100000
/// delta = 0.05
/// replications = 20
/// seed = 7
///
/// [function]
/// family = "example"
/// xi = [0.5, -0.25]
/// nu = 1.0
///
/// [noise]
/// kind = "gaussian"
/// sigma = 0.1
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmKind,
    pub horizon: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Noise scale given to the algorithm; defaults to the noise model's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Range bound given to the algorithm; defaults to the function's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    /// Offline runs per replication for `dg_offline_repeated`.
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// `f(A*)`, required when the ground set is too large to enumerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum: Option<f64>,
    pub function: FunctionDescriptor,
    pub noise: NoiseModel,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Self::from_toml_with_overrides(s, &[])
    }

    /// Parses `s` after applying dotted `key=value` overrides.
    pub fn from_toml_with_overrides(s: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut value: toml::Value = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        for (k, v) in overrides {
            set_dotted(&mut value, k, parse_scalar(v))?;
        }
        Self::from_value(value)
    }

    pub fn from_value(value: toml::Value) -> Result<Self> {
        let cfg: Self = value.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if let Some(s) = self.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("sigma must be positive, got {s}")));
            }
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("c must be positive, got {c}")));
            }
        }
        if self.algorithm == AlgorithmKind::DgOfflineRepeated && self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        self.noise.validate()?;
        self.function.build()?;
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    /// Hex SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml_string().as_bytes()))
    }
}

/// Reads an override value as TOML (`0.1`, `[1, 2]`, `"x"`), falling back
/// to a bare string.
pub(crate) fn parse_scalar(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

pub(crate) fn set_dotted(root: &mut toml::Value, key: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("malformed override key {key:?}")));
    }
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?} descends into a non-table")))?;
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| Error::Config(format!("override {key:?} descends into a non-table")))?;
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
pub(crate) const EXAMPLE_CONFIG: &str = r#"
algorithm = "dgetc"
horizon = 1000
replications = 3
seed = 7

[function]
family = "example"
xi = [0.5, -0.25]
nu = 1.0

[noise]
kind = "gaussian"
sigma = 0.1
"#;
