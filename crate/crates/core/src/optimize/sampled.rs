use log::warn;

use super::greedy::naive_pick;
use super::stochastic::{require_cardinality, stochastic_sample_size, subsample};
use super::{greedy, lazy_greedy, meta_greedy, stochastic_greedy, InnerEngine, RunReport};
use crate::constraints::ConstraintSystem;
use crate::error::{invalid, Result};
use crate::objective::{CallCounter, DecomposableObjective};
use crate::rng::batch_stream;
use crate::sampling::SamplingPlan;

fn check_plan(objective: &DecomposableObjective, plan: &SamplingPlan) -> Result<()> {
    if plan.probabilities.len() != objective.num_components() {
        return Err(invalid(format!(
            "plan has {} probabilities for {} components",
            plan.probabilities.len(),
            objective.num_components()
        )));
    }
    Ok(())
}

/// Mini-batch greedy: iteration `j` draws a fresh `F̂ʲ` from stream `(seed, j)`
/// and maximizes its marginal gains over `A_j` (or a stochastic-greedy
/// subsample of it). The reported value is the true `F`.
pub fn minibatch_greedy(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    plan: &SamplingPlan,
    inner: InnerEngine,
    seed: u64,
    k_cap: Option<usize>,
    counter: &CallCounter,
) -> Result<RunReport> {
    check_plan(objective, plan)?;
    let pool_size = match inner {
        InnerEngine::Naive => None,
        InnerEngine::Stochastic { eps_s } => {
            let k = require_cardinality(system)?;
            let k = k_cap.map_or(k, |c| c.min(k)).max(1);
            Some(stochastic_sample_size(objective.n(), k, eps_s).max(1))
        }
        InnerEngine::Lazy => {
            return Err(invalid("mini-batch greedy cannot use lazy evaluation"));
        }
    };
    meta_greedy(objective, system, k_cap, counter, |j, set, candidates| {
        let weights = plan.sample(&mut batch_stream(seed, j as u64));
        let batch = objective.reweighted(&weights)?;
        if batch.support().is_empty() {
            warn!("mini-batch {j} is empty");
        }
        let pick = match pool_size {
            Some(size) => naive_pick(&batch, set, &subsample(candidates, size, seed, j), counter),
            None => naive_pick(&batch, set, candidates, counter),
        };
        Ok((pick, batch.support().len()))
    })
}

/// Sparsifier greedy: one `F̂` drawn from stream `(seed, 0)` up front, then the
/// inner engine runs on it. The reported value is the true `F`.
pub fn sparsifier_greedy(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    plan: &SamplingPlan,
    inner: InnerEngine,
    seed: u64,
    k_cap: Option<usize>,
    counter: &CallCounter,
) -> Result<RunReport> {
    check_plan(objective, plan)?;
    let weights = plan.sample(&mut batch_stream(seed, 0));
    let sparse = objective.reweighted(&weights)?;
    if sparse.support().is_empty() {
        warn!("sparsifier is empty; every pick falls back to index order");
    }
    let mut report = match inner {
        InnerEngine::Naive => greedy(&sparse, system, k_cap, counter)?,
        InnerEngine::Lazy => lazy_greedy(&sparse, system, k_cap, counter)?,
        InnerEngine::Stochastic { eps_s } => {
            stochastic_greedy(&sparse, system, eps_s, seed, k_cap, counter)?
        }
    };
    report.value = objective.value_of(report.solution.members())?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::CardinalityConstraint;
    use crate::functions::{coverage_objective, modular_objective, BipartiteDataset};
    use crate::sampling::{SamplingPlan, SamplingScheme};

    fn coverage_example() -> DecomposableObjective {
        let data = BipartiteDataset::new(2, 2, vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        coverage_objective(&data).unwrap()
    }

    #[test]
    fn full_budget_uniform_is_greedy() {
        let obj = coverage_example();
        let sys = CardinalityConstraint::new(2, 2).unwrap();
        let plan = SamplingPlan::uniform(2, 1.0).unwrap();
        let c = CallCounter::new();
        let r = minibatch_greedy(&obj, &sys, &plan, InnerEngine::Naive, 1, None, &c).unwrap();
        assert_eq!(r.solution.members(), &[0, 1]);
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn identical_components_follow_greedy() {
        let obj = modular_objective(&vec![vec![3.0, 1.0, 4.0, 1.0, 5.0]; 20]).unwrap();
        let sys = CardinalityConstraint::new(5, 3).unwrap();
        let plan = SamplingPlan::uniform(20, 0.2).unwrap();
        let c = CallCounter::new();
        let exact = greedy(&obj, &sys, None, &c).unwrap();
        for seed in 0..20 {
            let r =
                minibatch_greedy(&obj, &sys, &plan, InnerEngine::Naive, seed, None, &c).unwrap();
            if r.trace.iter().all(|s| s.support > 0) {
                assert_eq!(r.solution, exact.solution);
            }
        }
    }

    #[test]
    fn empty_batches_pick_by_index() {
        let obj = modular_objective(&[vec![1.0, 5.0, 2.0]]).unwrap();
        let sys = CardinalityConstraint::new(3, 2).unwrap();
        let plan = SamplingPlan::new(vec![0.0], 1.0, SamplingScheme::Weighted).unwrap();
        let c = CallCounter::new();
        let r = minibatch_greedy(&obj, &sys, &plan, InnerEngine::Naive, 0, None, &c).unwrap();
        assert_eq!(r.solution.members(), &[0, 1]);
        assert_eq!(r.value, 6.0);
        assert_eq!(c.execution(), 0);
    }

    #[test]
    fn sparsifier_reports_true_value() {
        let obj = modular_objective(&[vec![1.0, 5.0, 2.0], vec![4.0, 0.0, 0.0]]).unwrap();
        let sys = CardinalityConstraint::new(3, 1).unwrap();
        let plan = SamplingPlan::new(vec![1.0, 0.0], 1.0, SamplingScheme::Weighted).unwrap();
        let c = CallCounter::new();
        let r = sparsifier_greedy(&obj, &sys, &plan, InnerEngine::Lazy, 0, None, &c).unwrap();
        assert_eq!(r.solution.members(), &[1]);
        assert_eq!(r.trace[0].estimated_gain, 5.0);
        assert_eq!(r.value, 5.0);
        assert_eq!(r.trace[0].support, 1);
    }

    #[test]
    fn plan_size_must_match() {
        let obj = coverage_example();
        let sys = CardinalityConstraint::new(2, 1).unwrap();
        let plan = SamplingPlan::uniform(3, 1.0).unwrap();
        let c = CallCounter::new();
        assert!(minibatch_greedy(&obj, &sys, &plan, InnerEngine::Naive, 0, None, &c).is_err());
        assert!(minibatch_greedy(
            &obj,
            &sys,
            &SamplingPlan::uniform(2, 1.0).unwrap(),
            InnerEngine::Lazy,
            0,
            None,
            &c
        )
        .is_err());
    }
}
