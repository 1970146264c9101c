//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! repetitions = 20
//! betas = [0.005, 0.01, 0.05]
//! ks = [5, 10]
//! engines = ["lazy", "minibatch", "sparsifier", "sparsifier:lazy", "stochastic"]
//! schemes = ["uniform", "weighted"]
//! eps_s = 0.1
//! svg = true
//!
//! [constraint]
//! kind = "cardinality"
//!
//! [dataset]
//! kind = "smoothed"
//! model = "2"
//! n = 50
//! num_components = 5000
//! phi = 0.3
//! d = 10
//! seed = 7
//! ```
//!
//! Engines are `naive`, `lazy`, `stochastic`, `minibatch` and `sparsifier`;
//! the sampled ones take an optional inner engine after a colon (`naive` by
//! default). Exact engines ignore `schemes` and `betas`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use minibatch_core::{CardinalityConstraint, ConstraintSystem, InnerEngine, PartitionMatroid};
use serde::{Deserialize, Serialize};

use crate::dataset::DatasetSpec;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Naive,
    Lazy,
    Stochastic,
    MiniBatch,
    Sparsifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    Naive,
    Lazy,
    Stochastic,
}

/// One entry of the `engines` list, written `name[:inner]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineEntry {
    pub kind: EngineKind,
    pub inner: InnerKind,
}

impl EngineEntry {
    pub fn is_sampled(&self) -> bool {
        matches!(self.kind, EngineKind::MiniBatch | EngineKind::Sparsifier)
    }

    pub fn inner_engine(&self, eps_s: f64) -> InnerEngine {
        match self.inner {
            InnerKind::Naive => InnerEngine::Naive,
            InnerKind::Lazy => InnerEngine::Lazy,
            InnerKind::Stochastic => InnerEngine::Stochastic { eps_s },
        }
    }

    pub fn uses_subsampling(&self) -> bool {
        self.kind == EngineKind::Stochastic
            || (self.is_sampled() && self.inner == InnerKind::Stochastic)
    }
}

impl FromStr for EngineEntry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, inner) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s.trim(), None),
        };
        let kind = match name {
            "naive" => EngineKind::Naive,
            "lazy" => EngineKind::Lazy,
            "stochastic" => EngineKind::Stochastic,
            "minibatch" => EngineKind::MiniBatch,
            "sparsifier" => EngineKind::Sparsifier,
            _ => return Err(format!("unknown engine {name:?}")),
        };
        let inner = match inner {
            None | Some("naive") => InnerKind::Naive,
            Some("lazy") => InnerKind::Lazy,
            Some("stochastic") => InnerKind::Stochastic,
            Some(other) => return Err(format!("unknown inner engine {other:?}")),
        };
        let entry = EngineEntry { kind, inner };
        if !entry.is_sampled() && inner != InnerKind::Naive {
            return Err(format!("{name} does not take an inner engine"));
        }
        if kind == EngineKind::MiniBatch && inner == InnerKind::Lazy {
            return Err(
                "minibatch cannot use a lazy inner engine: the function changes every iteration"
                    .into(),
            );
        }
        Ok(entry)
    }
}

impl fmt::Display for EngineEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            EngineKind::Naive => "naive",
            EngineKind::Lazy => "lazy",
            EngineKind::Stochastic => "stochastic",
            EngineKind::MiniBatch => "minibatch",
            EngineKind::Sparsifier => "sparsifier",
        };
        match (self.is_sampled(), self.inner) {
            (true, InnerKind::Lazy) => write!(f, "{name}:lazy"),
            (true, InnerKind::Stochastic) => write!(f, "{name}:stochastic"),
            _ => f.write_str(name),
        }
    }
}

impl Serialize for EngineEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EngineEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Uniform,
    Weighted,
}

impl SchemeName {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeName::Uniform => "uniform",
            SchemeName::Weighted => "weighted",
        }
    }
}

impl FromStr for SchemeName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "uniform" => Ok(SchemeName::Uniform),
            "weighted" => Ok(SchemeName::Weighted),
            other => Err(format!("unknown scheme {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSpec {
    /// `|S| ≤ k` for each `k` of the grid.
    #[default]
    Cardinality,
    /// Element `e` belongs to part `e mod parts`; each part takes at most `k`.
    Partition { parts: usize },
}

impl ConstraintSpec {
    pub fn build(&self, n: usize, k: usize) -> CliResult<Box<dyn ConstraintSystem>> {
        Ok(match self {
            ConstraintSpec::Cardinality => Box::new(CardinalityConstraint::new(n, k)?),
            ConstraintSpec::Partition { parts } => {
                if *parts == 0 {
                    return Err(CliError::Config(
                        "partition constraint needs at least one part".into(),
                    ));
                }
                let part_of = (0..n).map(|e| e % parts).collect();
                Box::new(PartitionMatroid::new(part_of, vec![k; *parts])?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub dataset: Option<DatasetSpec>,
    #[serde(default)]
    pub constraint: ConstraintSpec,
    #[serde(default = "default_engines")]
    pub engines: Vec<EngineEntry>,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeName>,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default = "default_ks")]
    pub ks: Vec<usize>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_eps_s")]
    pub eps_s: f64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    /// Weighted probabilities are read from here when the file exists.
    pub probs_cache: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
}

fn default_engines() -> Vec<EngineEntry> {
    vec![
        EngineEntry {
            kind: EngineKind::Lazy,
            inner: InnerKind::Naive,
        },
        EngineEntry {
            kind: EngineKind::MiniBatch,
            inner: InnerKind::Naive,
        },
        EngineEntry {
            kind: EngineKind::Sparsifier,
            inner: InnerKind::Naive,
        },
    ]
}
fn default_schemes() -> Vec<SchemeName> {
    vec![SchemeName::Uniform, SchemeName::Weighted]
}
fn default_betas() -> Vec<f64> {
    vec![0.01]
}
fn default_ks() -> Vec<usize> {
    vec![5]
}
fn default_repetitions() -> usize {
    20
}
fn default_eps_s() -> f64 {
    0.1
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dataset: None,
            constraint: ConstraintSpec::default(),
            engines: default_engines(),
            schemes: default_schemes(),
            betas: default_betas(),
            ks: default_ks(),
            repetitions: default_repetitions(),
            eps_s: default_eps_s(),
            threads: None,
            out: None,
            probs_cache: None,
            svg: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a config file; relative paths inside it are taken relative to the file.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(d) = cfg.dataset.as_mut() {
            d.rebase(base);
        }
        for p in [&mut cfg.out, &mut cfg.probs_cache].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let err = |m: &str| Err(CliError::Config(m.into()));
        if self.repetitions == 0 {
            return err("repetitions must be at least 1");
        }
        if self.engines.is_empty() || self.ks.is_empty() {
            return err("engines and ks must be nonempty");
        }
        if self.engines.iter().any(EngineEntry::is_sampled)
            && (self.schemes.is_empty() || self.betas.is_empty())
        {
            return err("sampled engines need nonempty schemes and betas");
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.0 && **b <= 1.0)) {
            return Err(CliError::Config(format!("beta must lie in (0,1], got {b}")));
        }
        if self.ks.contains(&0) {
            return err("k must be at least 1");
        }
        if self.engines.iter().any(EngineEntry::uses_subsampling) {
            if !(self.eps_s > 0.0 && self.eps_s < 1.0) {
                return err("eps_s must lie in (0,1)");
            }
            if self.constraint != ConstraintSpec::Cardinality {
                return err("stochastic subsampling needs a cardinality constraint");
            }
        }
        if self.dataset.is_none() {
            return err("no dataset given");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_entries_round_trip() {
        for s in [
            "naive",
            "lazy",
            "stochastic",
            "minibatch",
            "minibatch:stochastic",
            "sparsifier:lazy",
        ] {
            assert_eq!(s.parse::<EngineEntry>().unwrap().to_string(), s);
        }
        assert!("minibatch:lazy".parse::<EngineEntry>().is_err());
        assert!("lazy:naive".parse::<EngineEntry>().is_ok());
        assert!("lazy:stochastic".parse::<EngineEntry>().is_err());
        assert!("greedy".parse::<EngineEntry>().is_err());
    }

    #[test]
    fn parses_documented_example() {
        let text = r#"
            seed = 7
            betas = [0.005, 0.01, 0.05]
            ks = [5, 10]
            engines = ["lazy", "minibatch", "sparsifier:lazy"]
            [dataset]
            kind = "smoothed"
            model = "2"
            n = 50
            num_components = 5000
            phi = 0.3
            d = 10
            seed = 7
        "#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.repetitions, 20);
        assert_eq!(cfg.engines.len(), 3);
        assert!(matches!(cfg.dataset, Some(DatasetSpec::Smoothed(_))));
    }

    #[test]
    fn rejects_bad_grids() {
        let base = "[dataset]\nkind = \"builtin\"\nname = \"coverage-example\"\n";
        for bad in [
            "repetitions = 0\n",
            "betas = [1.5]\n",
            "ks = []\n",
            "ks = [0]\n",
        ] {
            let cfg = ExperimentConfig::from_toml(&format!("{bad}{base}")).unwrap();
            assert!(cfg.validate().is_err(), "{bad}");
        }
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }
}
