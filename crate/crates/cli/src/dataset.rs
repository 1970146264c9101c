//! Dataset specifications and loading them into objectives.

use std::path::{Path, PathBuf};

use minibatch_core::functions::io::{read_bipartite, read_points, read_values};
use minibatch_core::functions::{
    exemplar_objective, max_value_objective, modular_objective, supermodular_fixture,
};
use minibatch_core::{
    coverage_objective, facility_location_objective, generate_smoothed_instance, lloyd_centers,
    BipartiteDataset, DecomposableObjective, Metric, SmoothedInstanceSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const BUILTINS: &[&str] = &[
    "coverage-example",
    "modular-example",
    "constant-half",
    "supermodular-example",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    Builtin {
        name: String,
    },
    Smoothed(SmoothedInstanceSpec),
    /// Matrix of singleton values, one component per row; each row becomes a
    /// max-value component.
    Values {
        path: PathBuf,
    },
    /// Edge list; left nodes are components, right nodes are elements.
    Bipartite {
        path: PathBuf,
    },
    /// Point cloud, one point per row; facility location over Lloyd centers,
    /// or exemplar clustering over the points themselves.
    Points {
        path: PathBuf,
        #[serde(default = "default_metric")]
        metric: Metric,
        #[serde(default = "default_centers")]
        centers: usize,
        #[serde(default = "default_lloyd_iterations")]
        lloyd_iterations: usize,
        #[serde(default)]
        center_seed: u64,
        #[serde(default)]
        exemplar: bool,
    },
}

fn default_metric() -> Metric {
    Metric::Manhattan
}
pub fn default_centers() -> usize {
    20
}
pub fn default_lloyd_iterations() -> usize {
    50
}

/// A loaded objective with the identifiers that go into manifests.
pub struct Dataset {
    pub objective: DecomposableObjective,
    pub family: &'static str,
}

impl DatasetSpec {
    pub fn family(&self) -> &'static str {
        match self {
            DatasetSpec::Builtin { .. } => "builtin",
            DatasetSpec::Smoothed(_) => "smoothed",
            DatasetSpec::Values { .. } => "values",
            DatasetSpec::Bipartite { .. } => "coverage",
            DatasetSpec::Points { exemplar: true, .. } => "exemplar",
            DatasetSpec::Points { .. } => "facility",
        }
    }

    /// Resolves relative paths against `base`, the directory of the config file.
    pub fn rebase(&mut self, base: &Path) {
        match self {
            DatasetSpec::Values { path }
            | DatasetSpec::Bipartite { path }
            | DatasetSpec::Points { path, .. } => {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
            DatasetSpec::Builtin { .. } | DatasetSpec::Smoothed(_) => {}
        }
    }

    pub fn load(&self) -> CliResult<Dataset> {
        let objective = match self {
            DatasetSpec::Builtin { name } => builtin(name)?,
            DatasetSpec::Smoothed(spec) => generate_smoothed_instance(spec)?,
            DatasetSpec::Values { path } => {
                max_value_objective(read_values(path).map_err(|e| CliError::io(path, e))?)?
            }
            DatasetSpec::Bipartite { path } => {
                coverage_objective(&read_bipartite(path).map_err(|e| CliError::io(path, e))?)?
            }
            DatasetSpec::Points {
                path,
                metric,
                centers,
                lloyd_iterations,
                center_seed,
                exemplar,
            } => {
                let data = read_points(path, *metric).map_err(|e| CliError::io(path, e))?;
                if *exemplar {
                    exemplar_objective(&data)?
                } else {
                    let fitted = lloyd_centers(
                        &data,
                        (*centers).min(data.len()),
                        *lloyd_iterations,
                        *center_seed,
                    )?;
                    facility_location_objective(&data, &fitted.centers)?
                }
            }
        };
        Ok(Dataset {
            objective,
            family: self.family(),
        })
    }
}

pub fn builtin(name: &str) -> CliResult<DecomposableObjective> {
    let obj = match name {
        "coverage-example" => {
            coverage_objective(&BipartiteDataset::new(2, 2, vec![(0, 0), (1, 0), (1, 1)])?)?
        }
        "modular-example" => modular_objective(&[vec![5.0, 3.0, 1.0]])?,
        "constant-half" => max_value_objective(vec![vec![0.5; 5]; 10])?,
        "supermodular-example" => supermodular_fixture(6)?,
        other => {
            return Err(CliError::Config(format!(
                "unknown builtin dataset {other:?}; expected one of {}",
                BUILTINS.join(", ")
            )))
        }
    };
    Ok(obj)
}
