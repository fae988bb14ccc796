//! Key=value configuration files.
//!
//! Format: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored. Keys use the same names as the command's long flags
//! (without the leading dashes). Values given on the command line always win
//! over the file. Unknown keys are rejected so typos fail loudly.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(CliError::Usage(format!(
                    "{}:{}: empty key or value",
                    path.display(),
                    lineno + 1
                )));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(CliError::Usage(format!(
                    "{}:{}: duplicate key `{key}`",
                    path.display(),
                    lineno + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Rejects keys that the current command does not understand.
    pub fn ensure_known(&self, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.entries.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown config key `{key}` (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: `{raw}` is not {what}"))),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.parse(key, "a number")
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.parse(key, "a non-negative integer")
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.parse(key, "true or false")
    }

    pub fn get_string(&self, key: &str) -> Option<String> {
        self.entries.get(key).cloned()
    }
}

/// Parses a comma-separated list of numbers ("1.5,2,3e-2").
pub fn parse_f64_list(raw: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let vals: Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "{what}: expected a comma-separated list of numbers, got `{raw}`"
        ))),
    }
}

/// Parses a two-element range "min,max".
pub fn parse_range(raw: &str, what: &str) -> Result<(f64, f64), CliError> {
    let v = parse_f64_list(raw, what)?;
    if v.len() != 2 {
        return Err(CliError::Usage(format!(
            "{what}: expected exactly two comma-separated numbers, got `{raw}`"
        )));
    }
    Ok((v[0], v[1]))
}
