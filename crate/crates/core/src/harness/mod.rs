//! Monte Carlo experiments on expected counts and count distributions, with
//! plot-data emitters and the validation suite.

mod emit;
mod experiments;
mod validation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytics::ModelParams;
use crate::error::{Error, Result};
use crate::laplace::IltConfig;
use crate::sim::Engine;
use crate::stats::ChiSquareResult;

pub use emit::{
    curve_rows, distribution_rows, read_curves_csv, read_distributions_csv, write_curves_csv, write_distributions_csv,
    write_json, CurveRow, DistributionRow,
};
pub use experiments::{ilt_count_curve, run_distribution, run_expected_n, ExpectedNRun, ReplicaFailure};
pub use validation::{run_validation, Check, CriterionRecord, ValidationConfig, ValidationMode, ValidationReport};

/// What a run is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Closed-form expected count.
    Exact,
    /// Quadrature of the numerically inverted intensity.
    Ilt,
    /// Poisson pmf with mean `Λ0 t`.
    Poisson,
    /// Empirical pmf of the exponential-kernel Hawkes process on paired streams.
    ExpHawkes,
}

impl FromStr for Comparison {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "ilt" => Ok(Self::Ilt),
            "poisson" => Ok(Self::Poisson),
            "exp-hawkes" | "exp_hawkes" => Ok(Self::ExpHawkes),
            _ => Err(Error::Parse(format!("unknown comparison {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    /// Observation times, strictly increasing and positive.
    pub times: Vec<f64>,
    pub replicas: u64,
    pub seed: u64,
    pub engines: BTreeSet<Engine>,
    pub comparisons: BTreeSet<Comparison>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub ilt: IltConfig,
}

impl ExperimentConfig {
    /// Thinning engine, no comparisons, no output file.
    pub fn new(params: ModelParams, times: Vec<f64>, replicas: u64, seed: u64) -> Self {
        Self {
            params,
            times,
            replicas,
            seed,
            engines: [Engine::Thinning].into(),
            comparisons: BTreeSet::new(),
            output_path: None,
            format: OutputFormat::Csv,
            ilt: IltConfig::default(),
        }
    }

    pub fn with_comparisons(mut self, c: impl IntoIterator<Item = Comparison>) -> Self {
        self.comparisons = c.into_iter().collect();
        self
    }

    pub fn with_engines(mut self, e: impl IntoIterator<Item = Engine>) -> Self {
        self.engines = e.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.ilt.validate()?;
        if self.replicas < 1 {
            return Err(Error::domain("replicas must be at least 1"));
        }
        if self.times.is_empty() {
            return Err(Error::domain("at least one observation time is required"));
        }
        if self.times.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::domain("observation times must be positive and finite"));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("observation times must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Poisson,
    ExpHawkesEmpirical,
}

/// A labelled reference pmf. For the Poisson reference the support runs
/// past the empirical maximum until the remaining mass is negligible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePmf {
    pub kind: ReferenceKind,
    pub pmf: BTreeMap<u64, f64>,
}

/// Empirical histogram of `N(t)` over replicas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountDistribution {
    pub t: f64,
    pub engine: Engine,
    pub counts: BTreeMap<u64, u64>,
    pub replicas: u64,
    pub params: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferencePmf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tv_distance: Option<f64>,
    /// Only computed against the Poisson reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<ChiSquareResult>,
    /// Replicas that failed and are excluded from `counts`.
    #[serde(default)]
    pub failed_replicas: u64,
}

impl CountDistribution {
    pub fn from_samples(t: f64, engine: Engine, params: ModelParams, samples: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for &k in samples {
            *counts.entry(k).or_insert(0) += 1;
        }
        Self {
            t,
            engine,
            counts,
            replicas: samples.len() as u64,
            params,
            reference: None,
            tv_distance: None,
            chi_square: None,
            failed_replicas: 0,
        }
    }

    /// `p̂(k) = freq(k) / replicas` on `0..=max`, zeros included.
    pub fn pmf(&self) -> BTreeMap<u64, f64> {
        let n = self.replicas as f64;
        let kmax = self.counts.keys().next_back().copied().unwrap_or(0);
        (0..=kmax)
            .map(|k| (k, self.counts.get(&k).copied().unwrap_or(0) as f64 / n))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.counts.values().sum();
        if total != self.replicas {
            return Err(Error::domain(format!("frequencies sum to {total}, not {} replicas", self.replicas)));
        }
        Ok(())
    }
}
