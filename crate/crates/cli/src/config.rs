//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

/// Keys accepted in a configuration file.
pub const KNOWN_KEYS: &[&str] = &[
    "format",
    "n_max",
    "windows",
    "seed",
    "alpha",
    "z",
    "ball",
    "norm",
    "probes",
    "probe_radius",
    "grid",
    "haar_scale",
    "tolerance",
    "frame_floor",
    "riesz_floor",
    "lattice",
    "lattice.name",
    "lattice.generators",
    "lattice.covolume",
    "lattice.full_integer_group",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and lines starting with `#` are skipped. Unknown and
    /// repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                )));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            let value = value.trim().trim_matches('"').to_string();
            if values.insert(key.to_string(), value).is_some() {
                return Err(CliError::Usage(format!(
                    "config line {}: key {key:?} repeated",
                    lineno + 1
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parses the value of `key`, if present.
    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}"))),
        }
    }
}
