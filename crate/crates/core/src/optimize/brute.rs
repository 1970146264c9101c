use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::objective::{CallCounter, DecomposableObjective, Phase, SolutionSet};

/// Largest ground set [`brute_force_opt`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exhaustive maximum over independent sets of size at most the system's
/// bound. Sets are visited in lexicographic order of their sorted members
/// and only strict improvements replace the incumbent, so ties resolve to
/// the lexicographically smallest maximizer.
pub fn brute_force_opt(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    counter: &CallCounter,
) -> Result<(SolutionSet, f64)> {
    super::check_ground(objective, system)?;
    let n = objective.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let bound = system.solution_bound();
    let mut best = (Vec::new(), 0.0);
    let mut current = Vec::with_capacity(bound);
    search(
        objective,
        system,
        counter,
        bound,
        0,
        &mut current,
        &mut best,
    );
    Ok((SolutionSet::from_members(best.0)?, best.1))
}

fn search(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    counter: &CallCounter,
    bound: usize,
    from: usize,
    current: &mut Vec<usize>,
    best: &mut (Vec<usize>, f64),
) {
    if current.len() >= bound {
        return;
    }
    for e in from..objective.n() {
        current.push(e);
        if system.is_independent(current) {
            let value = objective.eval_members(current, counter, Phase::Execution);
            if value > best.1 {
                *best = (current.clone(), value);
            }
            search(objective, system, counter, bound, e + 1, current, best);
        }
        current.pop();
    }
}
