use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that replaces the config seed.
pub const SEED_ENV: &str = "GROWTHLAB_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    List(Vec<f64>),
}

/// Named blocker arguments for the `beliefs` model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArgumentsTable {
    pub names: Vec<String>,
    pub marginals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    pub horizon: Option<f64>,
    pub output_grid: Option<usize>,
    pub seed: Option<u64>,
    /// `cobb-douglas` or `leontief`; multifactor only.
    pub technology: Option<String>,
    pub arguments: Option<ArgumentsTable>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies `GROWTHLAB_SEED` when it is set.
    pub fn apply_seed_override(&mut self) -> Result<()> {
        match std::env::var(SEED_ENV) {
            Ok(raw) => {
                let seed = raw.trim().parse().map_err(|_| {
                    Error::param(SEED_ENV, format!("expected an unsigned integer, got `{raw}`"))
                })?;
                self.seed = Some(seed);
                Ok(())
            }
            Err(std::env::VarError::NotPresent) => Ok(()),
            Err(e) => Err(Error::param(SEED_ENV, e.to_string())),
        }
    }

    pub fn model(&self) -> Result<Model> {
        self.model.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    SemiEndog,
    Multifactor,
    Digital,
    CesLevel,
    CesSchedule,
    Delay,
    Beliefs,
}

impl Model {
    pub const ALL: [Model; 7] = [
        Model::SemiEndog,
        Model::Multifactor,
        Model::Digital,
        Model::CesLevel,
        Model::CesSchedule,
        Model::Delay,
        Model::Beliefs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::SemiEndog => "semi-endog",
            Model::Multifactor => "multifactor",
            Model::Digital => "digital",
            Model::CesLevel => "ces-level",
            Model::CesSchedule => "ces-schedule",
            Model::Delay => "delay",
            Model::Beliefs => "beliefs",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// Pulls typed values out of the parameter table and rejects leftovers.
pub(crate) struct Params {
    values: BTreeMap<String, ParamValue>,
}

impl Params {
    pub(crate) fn new(values: &BTreeMap<String, ParamValue>) -> Self {
        Self {
            values: values.clone(),
        }
    }

    pub(crate) fn number(&mut self, name: &str, default: f64) -> Result<f64> {
        Ok(self.optional_number(name)?.unwrap_or(default))
    }

    pub(crate) fn optional_number(&mut self, name: &str) -> Result<Option<f64>> {
        match self.values.remove(name) {
            None => Ok(None),
            Some(ParamValue::Number(v)) if v.is_finite() => Ok(Some(v)),
            Some(ParamValue::Number(v)) => Err(Error::param(name, format!("not finite: {v}"))),
            Some(ParamValue::List(_)) => Err(Error::param(name, "expected a single number")),
        }
    }

    pub(crate) fn list(&mut self, name: &str, default: &[f64]) -> Result<Vec<f64>> {
        let values = match self.values.remove(name) {
            None => default.to_vec(),
            Some(ParamValue::Number(v)) => vec![v],
            Some(ParamValue::List(v)) => v,
        };
        if values.is_empty() {
            return Err(Error::param(name, "list must not be empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param(name, "values must be finite"));
        }
        Ok(values)
    }

    pub(crate) fn finish(self, model: Model) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(name) => Err(Error::param(name, format!("not a parameter of model `{model}`"))),
        }
    }
}
