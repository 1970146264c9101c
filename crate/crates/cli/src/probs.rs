//! `probs`: weighted sampling probabilities, cached on disk.

use std::path::{Path, PathBuf};

use minibatch_core::sampling::{read_probabilities, write_probabilities};
use minibatch_core::{compute_weighted_probabilities, CallCounter, DecomposableObjective};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

#[derive(Debug, Clone, Serialize)]
pub struct ProbsOutcome {
    pub cache: PathBuf,
    pub cache_hit: bool,
    /// Oracle calls spent by this invocation.
    pub calls: u64,
    /// Calls recorded when the cache was produced.
    pub recorded_calls: u64,
    #[serde(skip)]
    pub probabilities: Vec<f64>,
}

pub fn manifest_path(cache: &Path) -> PathBuf {
    let mut name = cache
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    cache.with_file_name(name)
}

/// Reads the cache if present, otherwise computes the probabilities with
/// `N·n` preprocessing calls and writes cache and manifest.
pub fn cached_probabilities(
    objective: &DecomposableObjective,
    family: &str,
    seed: u64,
    cache: &Path,
) -> CliResult<ProbsOutcome> {
    let sidecar = manifest_path(cache);
    if cache.exists() {
        let probabilities = read_probabilities(cache).map_err(|e| CliError::io(cache, e))?;
        if probabilities.len() != objective.num_components() {
            return Err(CliError::Config(format!(
                "{} holds {} probabilities for {} components",
                cache.display(),
                probabilities.len(),
                objective.num_components()
            )));
        }
        let recorded_calls = match Manifest::read(&sidecar) {
            Ok(m) => m.preprocessing_calls.unwrap_or(0),
            Err(_) => (objective.n() * objective.num_components()) as u64,
        };
        return Ok(ProbsOutcome {
            cache: cache.into(),
            cache_hit: true,
            calls: 0,
            recorded_calls,
            probabilities,
        });
    }
    let counter = CallCounter::new();
    let probabilities = compute_weighted_probabilities(objective, &counter)?;
    let calls = counter.preprocessing();
    if let Some(dir) = cache.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    write_probabilities(cache, &probabilities).map_err(|e| CliError::io(cache, e))?;
    Manifest {
        family: family.into(),
        n: objective.n(),
        num_components: objective.num_components(),
        seed,
        files: vec![cache
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned()],
        preprocessing_calls: Some(calls),
        params: serde_json::Value::Null,
    }
    .write(&sidecar)?;
    Ok(ProbsOutcome {
        cache: cache.into(),
        cache_hit: false,
        calls,
        recorded_calls: calls,
        probabilities,
    })
}
