//! The JSON run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Verify,
    Scan,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Verify => "verify",
            Command::Scan => "scan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A parameter as written in the file: a number, a `"re+imi"` string, a
/// boolean or a list of these.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Bool(bool),
    Number(f64),
    Text(String),
    List(Vec<RawValue>),
}

/// How one parameter of a random grid is drawn. Exactly one shape is
/// allowed: `uniform`, `re` with `im`, `abs` with `arg`, `int`, or a fixed
/// `value`.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub uniform: Option<[f64; 2]>,
    pub re: Option<[f64; 2]>,
    pub im: Option<[f64; 2]>,
    pub abs: Option<[f64; 2]>,
    pub arg: Option<[f64; 2]>,
    pub int: Option<[i64; 2]>,
    pub value: Option<RawValue>,
}

/// `count` points drawn from `domain` with the given `seed`, keeping only
/// points that satisfy the operation's domain condition with `margin`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub count: usize,
    pub seed: Option<u64>,
    pub domain: BTreeMap<String, RangeSpec>,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverride {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_terms: Option<usize>,
}

pub type ParamTuple = BTreeMap<String, RawValue>;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// Function, identity or scan name.
    pub name: String,
    #[serde(default)]
    pub grid: Vec<ParamTuple>,
    pub random: Option<RandomSpec>,
    #[serde(default)]
    pub tolerance: ToleranceOverride,
    pub threshold: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {}", e)))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {}", path.display(), e)))?;
        Self::from_json(&text)
    }
}
