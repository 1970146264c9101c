use rand::seq::index;

use super::greedy::naive_pick;
use super::{meta_greedy, RunReport};
use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::objective::{CallCounter, DecomposableObjective};
use crate::rng::candidate_stream;

/// `⌈(n/k)·ln(1/ε)⌉`, the per-iteration candidate sample size.
pub fn stochastic_sample_size(n: usize, k: usize, eps_s: f64) -> usize {
    ((n as f64 / k as f64) * (1.0 / eps_s).ln()).ceil() as usize
}

/// A uniform subset of `candidates` (kept in ascending order) of at most `size` elements.
pub(crate) fn subsample(candidates: &[usize], size: usize, seed: u64, j: usize) -> Vec<usize> {
    if size >= candidates.len() {
        return candidates.to_vec();
    }
    let mut rng = candidate_stream(seed, j as u64);
    let mut picked: Vec<usize> = index::sample(&mut rng, candidates.len(), size)
        .into_iter()
        .map(|i| candidates[i])
        .collect();
    picked.sort_unstable();
    picked
}

pub(crate) fn require_cardinality(system: &dyn ConstraintSystem) -> Result<usize> {
    system.cardinality().ok_or_else(|| {
        Error::UnsupportedConstraint("stochastic greedy needs a cardinality constraint".into())
    })
}

/// Stochastic greedy: each iteration maximizes over a uniform random subset of `A_j`.
pub fn stochastic_greedy(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    eps_s: f64,
    seed: u64,
    k_cap: Option<usize>,
    counter: &CallCounter,
) -> Result<RunReport> {
    let k = require_cardinality(system)?;
    let k = k_cap.map_or(k, |c| c.min(k)).max(1);
    let size = stochastic_sample_size(objective.n(), k, eps_s).max(1);
    let support = objective.support().len();
    meta_greedy(objective, system, k_cap, counter, |j, set, candidates| {
        let pool = subsample(candidates, size, seed, j);
        Ok((naive_pick(objective, set, &pool, counter), support))
    })
}
