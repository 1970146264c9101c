use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::greedy::{base_value, candidate_gains};
use super::{meta_greedy, Pick, RunReport};
use crate::constraints::ConstraintSystem;
use crate::error::Result;
use crate::objective::{CallCounter, DecomposableObjective, Phase};

/// Heap entry ordered by key (largest first), then by element (smallest first).
#[derive(Debug, Clone, Copy)]
struct Entry {
    key: f64,
    element: usize,
    /// Iteration in which `key` was computed.
    fresh_at: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.element.cmp(&self.element))
    }
}

/// Lazy greedy. Keys are stale marginal gains, which upper-bound the current
/// ones by submodularity, so an entry refreshed in the current iteration that
/// is still on top is the exact argmax. With the heap's tie order this picks
/// the same element as [`greedy`](super::greedy) on every iteration.
pub fn lazy_greedy(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    k_cap: Option<usize>,
    counter: &CallCounter,
) -> Result<RunReport> {
    let support = objective.support().len();
    let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
    let mut allowed = vec![false; objective.n()];
    meta_greedy(objective, system, k_cap, counter, |j, set, candidates| {
        allowed.iter_mut().for_each(|a| *a = false);
        candidates.iter().for_each(|&e| allowed[e] = true);
        let mut evaluated = 0;
        if j == 0 {
            let gains = candidate_gains(objective, set, candidates, 0.0, counter);
            heap.extend(candidates.iter().zip(gains).map(|(&element, key)| Entry {
                key,
                element,
                fresh_at: 0,
            }));
            evaluated = candidates.len();
        }
        let mut cached: Option<f64> = None;
        loop {
            let Some(top) = heap.pop() else {
                // Candidates were pruned only when they left A_j, so this is unreachable
                // for a nonempty candidate list; fall back to the first candidate.
                return Ok((
                    Pick {
                        element: candidates[0],
                        gain: 0.0,
                        evaluated,
                    },
                    support,
                ));
            };
            if !allowed[top.element] {
                continue;
            }
            if top.fresh_at == j {
                return Ok((
                    Pick {
                        element: top.element,
                        gain: top.key,
                        evaluated,
                    },
                    support,
                ));
            }
            let base = *cached.get_or_insert_with(|| base_value(objective, set, counter));
            let key =
                objective.eval_members(&set.with(top.element), counter, Phase::Execution) - base;
            evaluated += 1;
            heap.push(Entry {
                key,
                element: top.element,
                fresh_at: j,
            });
        }
    })
}
