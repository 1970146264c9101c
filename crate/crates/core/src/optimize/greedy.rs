use rayon::prelude::*;

use super::{argmax, meta_greedy, Pick, RunReport};
use crate::constraints::ConstraintSystem;
use crate::error::Result;
use crate::objective::{CallCounter, DecomposableObjective, Phase, SolutionSet};

/// `F(S)` for the current solution, skipping the evaluation on `∅` where it is 0 by normalization.
pub(crate) fn base_value(
    objective: &DecomposableObjective,
    set: &SolutionSet,
    counter: &CallCounter,
) -> f64 {
    if set.is_empty() {
        0.0
    } else {
        objective.eval_members(set.members(), counter, Phase::Execution)
    }
}

/// `F(S+e) − base` for every candidate, in candidate order.
pub(crate) fn candidate_gains(
    objective: &DecomposableObjective,
    set: &SolutionSet,
    candidates: &[usize],
    base: f64,
    counter: &CallCounter,
) -> Vec<f64> {
    candidates
        .par_iter()
        .map(|&e| objective.eval_members(&set.with(e), counter, Phase::Execution) - base)
        .collect()
}

/// Evaluates every candidate of `objective` and returns the best one.
pub(crate) fn naive_pick(
    objective: &DecomposableObjective,
    set: &SolutionSet,
    candidates: &[usize],
    counter: &CallCounter,
) -> Pick {
    if objective.support().is_empty() {
        log::warn!("sampled function has empty support; picking by index");
    }
    let base = base_value(objective, set, counter);
    let gains = candidate_gains(objective, set, candidates, base, counter);
    let best = argmax(&gains).unwrap_or(0);
    Pick {
        element: candidates[best],
        gain: gains.get(best).copied().unwrap_or(0.0),
        evaluated: candidates.len(),
    }
}

/// Exact greedy: every candidate's marginal gain is evaluated each iteration.
pub fn greedy(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    k_cap: Option<usize>,
    counter: &CallCounter,
) -> Result<RunReport> {
    let support = objective.support().len();
    meta_greedy(objective, system, k_cap, counter, |_, set, candidates| {
        Ok((naive_pick(objective, set, candidates, counter), support))
    })
}
