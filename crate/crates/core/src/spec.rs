//! Benchmark spec files and dotted-path overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::env::{ConfigFile, EpisodeConfig};
use crate::error::{Error, Result};
use crate::policy::{PolicyKind, PolicySettings};

/// Optional replacements for the confidence-set hyperparameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfidenceOverrides {
    /// Radius scale; 1 keeps the theoretical radius.
    pub xi: Option<f64>,
    #[serde(rename = "L_f")]
    pub l_f: Option<f64>,
    #[serde(rename = "L_p")]
    pub l_p: Option<f64>,
    pub window: Option<usize>,
    pub radius_coeff: Option<f64>,
}

/// On-disk benchmark spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub config: ConfigFile,
    pub budgets: Vec<f64>,
    pub replicates: usize,
    pub policies: Vec<PolicyKind>,
    pub seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub confidence: ConfidenceOverrides,
}

/// A validated benchmark grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub base_config: EpisodeConfig,
    pub budgets: Vec<f64>,
    pub replicates: usize,
    pub policies: Vec<PolicyKind>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub confidence: ConfidenceOverrides,
}

impl BenchmarkSpec {
    pub fn from_file(file: SpecFile) -> Result<Self> {
        if file.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        if file.budgets.is_empty() || file.budgets.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::InvalidConfig("budgets must be non-empty and positive".into()));
        }
        if file.policies.is_empty() {
            return Err(Error::InvalidConfig("at least one policy is required".into()));
        }
        let base_config = EpisodeConfig::from_file(&file.config)?;
        let spec = BenchmarkSpec {
            base_config,
            budgets: file.budgets,
            replicates: file.replicates,
            policies: file.policies,
            seed: file.seed,
            output_dir: file.output_dir,
            confidence: file.confidence,
        };
        for kind in &spec.policies {
            crate::policy::build(*kind, &spec.base_config, &spec.settings_for(&spec.base_config))?;
        }
        Ok(spec)
    }

    pub fn from_json(text: &str, overrides: &[String]) -> Result<Self> {
        let mut value: Value = serde_json::from_str(text)?;
        apply_overrides(&mut value, overrides)?;
        Self::from_file(serde_json::from_value(value)?)
    }

    /// Reads a spec and applies `key=value` overrides before validation.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let value = read_json(path)?;
        let mut value = value;
        apply_overrides(&mut value, overrides)?;
        Self::from_file(serde_json::from_value(value)?)
    }

    /// Hyperparameters for `config` (one budget of the grid) with this
    /// spec's overrides applied.
    pub fn settings_for(&self, config: &EpisodeConfig) -> PolicySettings {
        let mut s = PolicySettings::for_config(config);
        let o = &self.confidence;
        if let Some(xi) = o.xi {
            s.confidence.radius_scale = xi;
        }
        if let Some(l_f) = o.l_f {
            s.confidence.l_f = l_f;
        }
        if let Some(l_p) = o.l_p {
            s.confidence.l_p = l_p;
        }
        if let Some(w) = o.window {
            s.sw.window = w;
        }
        if let Some(c) = o.radius_coeff {
            s.sw.radius_coeff = c;
        }
        s
    }

    pub fn record_count(&self) -> usize {
        self.policies.len() * self.budgets.len() * self.replicates
    }
}

/// Parses a JSON file, reporting syntax errors with line and column.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Applies `a.b.c=value` overrides in order. The path must already exist in
/// the document (array elements are addressed by index). Values are parsed
/// as JSON, falling back to a plain string.
pub fn apply_overrides(doc: &mut Value, overrides: &[String]) -> Result<()> {
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| Error::Override(item.clone(), "expected key=value".into()))?;
        let mut slot = &mut *doc;
        let mut walked = Vec::new();
        for part in key.split('.') {
            walked.push(part);
            let next = match slot {
                Value::Object(map) => map.get_mut(part),
                Value::Array(items) => part.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
                _ => None,
            };
            slot = next.ok_or_else(|| {
                Error::Override(key.to_owned(), format!("unknown key '{}'", walked.join(".")))
            })?;
        }
        *slot = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_owned()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    #[test]
    fn overrides_replace_existing_paths() {
        let mut v = json!({"replicates": 10, "confidence": {"xi": 1.0}, "budgets": [1, 2]});
        apply_overrides(
            &mut v,
            &["replicates=2".into(), "confidence.xi=0.05".into(), "budgets.1=7".into()],
        )
        .unwrap();
        assert_eq!(v, json!({"replicates": 2, "confidence": {"xi": 0.05}, "budgets": [1, 7]}));
    }

    #[test]
    fn overrides_reject_unknown_keys() {
        let mut v = json!({"replicates": 10});
        assert!(apply_overrides(&mut v, &["replicate=2".into()]).is_err());
        assert!(apply_overrides(&mut v, &["replicates.x=2".into()]).is_err());
        assert!(apply_overrides(&mut v, &["replicates".into()]).is_err());
    }

    #[test]
    fn string_fallback() {
        let mut v = json!({"output_dir": "a"});
        apply_overrides(&mut v, &["output_dir=/tmp/out".into()]).unwrap();
        assert_eq!(v["output_dir"], "/tmp/out");
    }
}
