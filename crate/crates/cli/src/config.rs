//! Flat `key = value` configuration with `#` comments.
//!
//! Each subcommand declares a schema of accepted keys with defaults. Keys
//! outside the schema are rejected, as are duplicates within one file.
//! `--set key=value` overrides are applied after the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// Where a value came from, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Default,
    Line(usize),
    Override,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => f.write_str("default"),
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override => f.write_str("--set"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("--set expects key=value, got `{0}`")]
    BadOverride(String),
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { key: String, line: usize },
    #[error("{origin}: unknown key `{key}` (accepted: {accepted})")]
    UnknownKey {
        key: String,
        origin: Origin,
        accepted: String,
    },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        origin: Origin,
        reason: String,
    },
}

/// One accepted key.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// Key/value pairs in file order, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    pub entries: Vec<(String, String, Origin)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: Vec<(String, String, Origin)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: raw.trim().to_string(),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(ConfigError::Syntax {
                    line,
                    text: raw.trim().to_string(),
                });
            }
            if entries.iter().any(|(key, _, _)| key == k) {
                return Err(ConfigError::Duplicate { key: k.to_string(), line });
            }
            entries.push((k.to_string(), v.to_string(), Origin::Line(line)));
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Applies `key=value` overrides; later ones win.
    pub fn apply_overrides(&mut self, sets: &[String]) -> Result<(), ConfigError> {
        for s in sets {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| ConfigError::BadOverride(s.clone()))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(ConfigError::BadOverride(s.clone()));
            }
            self.entries.retain(|(key, _, _)| key != &k);
            self.entries.push((k, v, Origin::Override));
        }
        Ok(())
    }
}

/// Validated configuration: every schema key has a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<&'static str, (String, Origin)>,
    order: Vec<&'static str>,
}

impl Settings {
    pub fn resolve(schema: &[KeySpec], raw: &RawConfig) -> Result<Self, ConfigError> {
        let mut values: BTreeMap<&'static str, (String, Origin)> = schema
            .iter()
            .map(|s| (s.key, (s.default.to_string(), Origin::Default)))
            .collect();
        for (k, v, origin) in &raw.entries {
            let spec = schema.iter().find(|s| s.key == k).ok_or_else(|| ConfigError::UnknownKey {
                key: k.clone(),
                origin: *origin,
                accepted: schema.iter().map(|s| s.key).collect::<Vec<_>>().join(", "),
            })?;
            values.insert(spec.key, (v.clone(), *origin));
        }
        Ok(Self {
            values,
            order: schema.iter().map(|s| s.key).collect(),
        })
    }

    pub fn raw(&self, key: &str) -> &str {
        &self.entry(key).0
    }

    fn entry(&self, key: &str) -> &(String, Origin) {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("key `{key}` missing from schema"))
    }

    pub fn invalid(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        let (value, origin) = self.entry(key);
        ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.clone(),
            origin: *origin,
            reason: reason.into(),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.raw(key).parse().map_err(|e: T::Err| self.invalid(key, e.to_string()))
    }

    /// Finite float, optionally required to be strictly positive.
    pub fn float(&self, key: &str, positive: bool) -> Result<f64, ConfigError> {
        let x: f64 = self.get(key)?;
        if !x.is_finite() {
            return Err(self.invalid(key, "must be finite"));
        }
        if positive && x <= 0.0 {
            return Err(self.invalid(key, "must be positive"));
        }
        Ok(x)
    }

    /// Comma-separated list; empty value gives an empty list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let raw = self.raw(key);
        if raw.is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|e: T::Err| self.invalid(key, e.to_string()))
            })
            .collect()
    }

    /// One of `choices`.
    pub fn choice(&self, key: &str, choices: &[&'static str]) -> Result<&'static str, ConfigError> {
        let raw = self.raw(key);
        choices
            .iter()
            .find(|c| c.eq_ignore_ascii_case(raw))
            .copied()
            .ok_or_else(|| self.invalid(key, format!("expected one of {}", choices.join(", "))))
    }

    /// `key = value` lines in schema order; reparses to the same settings.
    pub fn echo(&self) -> String {
        self.order
            .iter()
            .map(|k| format!("{k} = {}\n", self.raw(k)))
            .collect()
    }
}
