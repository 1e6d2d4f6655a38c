use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{registry, CheckSpec};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown suite `{0}` (expected atlas, bundles, restricted or all)")]
    UnknownSuite(String),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no ambient dimensions given")]
    NoDims,
    #[error("ambient dimension {0} is below 2")]
    DimTooSmall(usize),
    #[error("ladder must be a non-empty strictly increasing list of sizes >= 1, got {0:?}")]
    BadLadder(Vec<usize>),
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    BadTolerance { name: String, value: f64 },
    #[error("malformed tolerance override `{0}` (expected name=value)")]
    MalformedOverride(String),
    #[error("cannot read config file {path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot parse config file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Atlas,
    Bundles,
    Restricted,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Atlas => "atlas",
            Suite::Bundles => "bundles",
            Suite::Restricted => "restricted",
            Suite::All => "all",
        }
    }

    /// Whether a check filed under `group` runs in this suite.
    pub fn includes(&self, group: Suite) -> bool {
        *self == Suite::All || *self == group
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "atlas" => Ok(Suite::Atlas),
            "bundles" => Ok(Suite::Bundles),
            "restricted" => Ok(Suite::Restricted),
            "all" => Ok(Suite::All),
            other => Err(ConfigError::UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Keyed by check name or by a check's tolerance key.
    pub tolerances: BTreeMap<String, f64>,
    pub ladder: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            dims: vec![4, 8, 16, 32],
            trials: 100,
            seed: 0,
            tolerances: BTreeMap::new(),
            ladder: vec![16, 32, 64, 128],
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.dims.is_empty() {
            return Err(ConfigError::NoDims);
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(ConfigError::DimTooSmall(d));
        }
        if self.ladder.is_empty()
            || self.ladder[0] == 0
            || self.ladder.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(ConfigError::BadLadder(self.ladder.clone()));
        }
        let specs = registry();
        for (name, &value) in &self.tolerances {
            if !specs.iter().any(|s| s.name == name || s.tol_key == name) {
                return Err(ConfigError::UnknownTolerance(name.clone()));
            }
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::BadTolerance {
                    name: name.clone(),
                    value,
                });
            }
        }
        Ok(())
    }

    /// The tolerance in force for `spec`: a check-name override wins over a
    /// tolerance-key override, which wins over the default.
    pub fn tolerance(&self, spec: &CheckSpec) -> f64 {
        self.tolerances
            .get(spec.name)
            .or_else(|| self.tolerances.get(spec.tol_key))
            .copied()
            .unwrap_or(spec.default_tol)
    }

    /// Parses `name=value`.
    pub fn parse_override(s: &str) -> Result<(String, f64), ConfigError> {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| ConfigError::MalformedOverride(s.to_string()))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| ConfigError::MalformedOverride(s.to_string()))?;
        Ok((name.trim().to_string(), value))
    }
}

/// The on-disk form of a configuration. Every field is optional; missing
/// fields keep their defaults.
///
/// ```toml
/// suite = "atlas"
/// dims = [4, 8]
/// trials = 50
/// seed = 42
/// ladder = [16, 32, 64, 128]
///
/// [tol]
/// roundtrip_eps = 1e-10
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub suite: Option<String>,
    pub dims: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub ladder: Option<Vec<usize>>,
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn apply(self, cfg: &mut SuiteConfig) -> Result<(), ConfigError> {
        if let Some(s) = self.suite {
            cfg.suite = s.parse()?;
        }
        if let Some(d) = self.dims {
            cfg.dims = d;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(l) = self.ladder {
            cfg.ladder = l;
        }
        cfg.tolerances.extend(self.tol);
        Ok(())
    }
}
