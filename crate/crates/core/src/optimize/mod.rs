//! Greedy engines.
//!
//! Every engine is an instance of the same loop: at iteration `j` take the
//! candidate set `A_j` from the constraint system, stop if it is empty, and
//! add the candidate with the largest (estimated) marginal gain. Engines
//! differ only in how the gains are estimated and which candidates are
//! looked at. Ties always go to the smallest element index.

mod brute;
mod greedy;
mod lazy;
mod sampled;
mod stochastic;

pub use brute::{brute_force_opt, BRUTE_FORCE_LIMIT};
pub use greedy::greedy;
pub use lazy::lazy_greedy;
pub use sampled::{minibatch_greedy, sparsifier_greedy};
pub use stochastic::{stochastic_greedy, stochastic_sample_size};

use serde::{Deserialize, Serialize};

use crate::constraints::ConstraintSystem;
use crate::error::{invalid, Result};
use crate::objective::{CallCounter, CallCounts, DecomposableObjective, SolutionSet};
use crate::sampling::SamplingPlan;

/// One greedy iteration as seen by the engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub element: usize,
    /// Marginal gain of the pick under the function the engine optimized
    /// (the sampled `F̂ʲ` for sampled engines).
    pub estimated_gain: f64,
    /// Components with positive weight in the function the engine optimized.
    pub support: usize,
    /// `|A_j|`.
    pub candidates: usize,
    /// Candidates whose gain was actually evaluated.
    pub evaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub solution: SolutionSet,
    /// `F(solution)` under the true objective.
    pub value: f64,
    pub calls: CallCounts,
    pub trace: Vec<TraceStep>,
    /// The loop stopped because `A_j` was empty before reaching its size cap.
    pub early_exit: bool,
}

/// Inner engine run on each sampled function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InnerEngine {
    Naive,
    Lazy,
    Stochastic { eps_s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Engine {
    Naive,
    Lazy,
    Stochastic {
        eps_s: f64,
    },
    /// Fresh `F̂ʲ` every iteration.
    MiniBatch {
        plan: SamplingPlan,
        inner: InnerEngine,
    },
    /// One `F̂` drawn up front.
    Sparsifier {
        plan: SamplingPlan,
        inner: InnerEngine,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    PerIteration,
    Once,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Naive => "naive",
            Engine::Lazy => "lazy",
            Engine::Stochastic { .. } => "stochastic",
            Engine::MiniBatch { .. } => "minibatch",
            Engine::Sparsifier { .. } => "sparsifier",
        }
    }

    /// When sampled functions are drawn; `None` for engines that query `F` directly.
    pub fn schedule(&self) -> Option<Schedule> {
        match self {
            Engine::MiniBatch { .. } => Some(Schedule::PerIteration),
            Engine::Sparsifier { .. } => Some(Schedule::Once),
            _ => None,
        }
    }

    pub fn plan(&self) -> Option<&SamplingPlan> {
        match self {
            Engine::MiniBatch { plan, .. } | Engine::Sparsifier { plan, .. } => Some(plan),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub engine: Engine,
    pub seed: u64,
    /// Extra cap on the number of iterations, on top of the constraint's bound.
    pub k_cap: Option<usize>,
}

impl EngineConfig {
    pub fn new(engine: Engine, seed: u64) -> Self {
        Self {
            engine,
            seed,
            k_cap: None,
        }
    }

    pub fn with_k_cap(mut self, k: usize) -> Self {
        self.k_cap = Some(k);
        self
    }

    pub fn validate(&self, objective: &DecomposableObjective) -> Result<()> {
        let check_eps = |eps: f64| {
            if eps > 0.0 && eps < 1.0 {
                Ok(())
            } else {
                Err(invalid(format!(
                    "stochastic-greedy eps must lie in (0,1), got {eps}"
                )))
            }
        };
        match &self.engine {
            Engine::Stochastic { eps_s } => check_eps(*eps_s)?,
            Engine::MiniBatch { plan, inner } | Engine::Sparsifier { plan, inner } => {
                if plan.probabilities.len() != objective.num_components() {
                    return Err(invalid(format!(
                        "plan has {} probabilities for {} components",
                        plan.probabilities.len(),
                        objective.num_components()
                    )));
                }
                if let InnerEngine::Stochastic { eps_s } = inner {
                    check_eps(*eps_s)?;
                }
                if matches!(self.engine, Engine::MiniBatch { .. }) && *inner == InnerEngine::Lazy {
                    return Err(invalid(
                        "lazy evaluation needs a fixed function; mini-batch redraws it every iteration",
                    ));
                }
            }
            Engine::Naive | Engine::Lazy => {}
        }
        Ok(())
    }

    pub fn run(
        &self,
        objective: &DecomposableObjective,
        system: &dyn ConstraintSystem,
        counter: &CallCounter,
    ) -> Result<RunReport> {
        self.validate(objective)?;
        let k = self.k_cap;
        match &self.engine {
            Engine::Naive => greedy(objective, system, k, counter),
            Engine::Lazy => lazy_greedy(objective, system, k, counter),
            Engine::Stochastic { eps_s } => {
                stochastic_greedy(objective, system, *eps_s, self.seed, k, counter)
            }
            Engine::MiniBatch { plan, inner } => {
                minibatch_greedy(objective, system, plan, *inner, self.seed, k, counter)
            }
            Engine::Sparsifier { plan, inner } => {
                sparsifier_greedy(objective, system, plan, *inner, self.seed, k, counter)
            }
        }
    }
}

/// The element chosen in one iteration.
pub(crate) struct Pick {
    pub element: usize,
    pub gain: f64,
    pub evaluated: usize,
}

pub(crate) fn iteration_cap(system: &dyn ConstraintSystem, k_cap: Option<usize>) -> usize {
    let bound = system.solution_bound();
    k_cap.map_or(bound, |k| k.min(bound))
}

pub(crate) fn check_ground(
    objective: &DecomposableObjective,
    system: &dyn ConstraintSystem,
) -> Result<()> {
    if objective.n() != system.ground_size() {
        return Err(invalid(format!(
            "objective has {} elements but the constraint system has {}",
            objective.n(),
            system.ground_size()
        )));
    }
    Ok(())
}

/// Runs the meta greedy loop; `step` picks an element from a nonempty `A_j`.
/// `support` reports the support of the function used at iteration `j`.
pub(crate) fn meta_greedy<F>(
    truth: &DecomposableObjective,
    system: &dyn ConstraintSystem,
    k_cap: Option<usize>,
    counter: &CallCounter,
    mut step: F,
) -> Result<RunReport>
where
    F: FnMut(usize, &SolutionSet, &[usize]) -> Result<(Pick, usize)>,
{
    check_ground(truth, system)?;
    let cap = iteration_cap(system, k_cap);
    let mut solution = SolutionSet::new();
    let mut trace = Vec::with_capacity(cap);
    let mut early_exit = false;
    for j in 0..cap {
        let candidates = system.candidates(&solution)?;
        if candidates.is_empty() {
            early_exit = true;
            break;
        }
        let (pick, support) = step(j, &solution, &candidates)?;
        solution.insert(pick.element)?;
        trace.push(TraceStep {
            element: pick.element,
            estimated_gain: pick.gain,
            support,
            candidates: candidates.len(),
            evaluated: pick.evaluated,
        });
    }
    let value = truth.value_of(solution.members())?;
    Ok(RunReport {
        solution,
        value,
        calls: counter.snapshot(),
        trace,
        early_exit,
    })
}

/// Index of the largest gain, first occurrence winning ties.
pub(crate) fn argmax(gains: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, g) in gains.iter().enumerate() {
        match best {
            Some(b) if *g <= gains[b] => {}
            _ if g.is_nan() => {}
            _ => best = Some(i),
        }
    }
    best
}
