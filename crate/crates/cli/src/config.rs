use std::path::{Path, PathBuf};

use fhawkes_core::harness::{Comparison, OutputFormat};
use fhawkes_core::{Engine, ModelParams};
use serde::Deserialize;

use crate::CliError;

/// Optional JSON config: keys are the long flags with `-` written as `_`.
/// Any flag given on the command line takes precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda0: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub t_max: Option<f64>,
    pub grid: Option<usize>,
    pub times: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub method: Option<String>,
    pub replicas: Option<u64>,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
    pub engine: Option<Engine>,
    pub compare: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Model flags as given on the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModelFlags {
    pub lambda0: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

impl ModelFlags {
    pub fn resolve(&self, file: &FileConfig) -> Result<ModelParams, CliError> {
        let get = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
            flag.or(from_file)
                .ok_or_else(|| CliError::Usage(format!("--{name} is required (flag or config file)")))
        };
        let p = ModelParams {
            lambda0: get(self.lambda0, file.lambda0, "lambda0")?,
            alpha: get(self.alpha, file.alpha, "alpha")?,
            beta: get(self.beta, file.beta, "beta")?,
            gamma: get(self.gamma, file.gamma, "gamma")?,
        };
        p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(p)
    }
}

/// Parse a string-valued config entry with the same names as the flag.
pub fn parse_choice<T: clap::ValueEnum>(s: &str, key: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| CliError::Usage(format!("config: invalid {key} {s:?}")))
}

/// `--compare` values; `none` requests no reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Compare {
    Poisson,
    ExpHawkes,
    None,
}

impl Compare {
    pub fn comparison(self) -> Option<Comparison> {
        match self {
            Self::Poisson => Some(Comparison::Poisson),
            Self::ExpHawkes => Some(Comparison::ExpHawkes),
            Self::None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LambdaMethod {
    Exact,
    Ilt,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CountMethod {
    Exact,
    Ilt,
    Mc,
    All,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = serde_json::from_str(r#"{"lambda0": 2.0, "alpha": 0.2, "beta": 0.5, "gamma": 1.0}"#).unwrap();
        let flags = ModelFlags {
            alpha: Some(0.4),
            ..ModelFlags::default()
        };
        let p = flags.resolve(&file).unwrap();
        assert_eq!((p.lambda0, p.alpha), (2.0, 0.4));
    }

    #[test]
    fn missing_and_invalid_parameters_are_usage_errors() {
        let file = FileConfig::default();
        assert!(matches!(ModelFlags::default().resolve(&file), Err(CliError::Usage(_))));
        let bad = ModelFlags {
            lambda0: Some(1.0),
            alpha: Some(1.0),
            beta: Some(0.5),
            gamma: Some(1.0),
        };
        assert!(matches!(bad.resolve(&file), Err(CliError::Usage(_))));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"lambda": 1.0}"#).is_err());
    }

    #[test]
    fn string_choices_parse_like_flags() {
        assert_eq!(parse_choice::<Compare>("exp-hawkes", "compare").unwrap(), Compare::ExpHawkes);
        assert!(parse_choice::<CountMethod>("fast", "method").is_err());
    }
}
