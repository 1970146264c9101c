//! Greedy maximization of decomposable monotone submodular functions
//! `F = Σᵢ fⁱ` with exact, lazy, stochastic, sparsifier and mini-batch
//! engines, under cardinality and p-system constraints.
//!
//! The cost model throughout is the oracle call: one evaluation of one
//! component `fⁱ` on one set. Every engine reports its calls split into
//! preprocessing (computing sampling probabilities) and execution.
//!
//! ```
//! use minibatch_core::{
//!     coverage_objective, greedy, minibatch_greedy, BipartiteDataset, CallCounter,
//!     CardinalityConstraint, InnerEngine, SamplingPlan,
//! };
//!
//! let data = BipartiteDataset::new(2, 2, vec![(0, 0), (1, 0), (1, 1)]).unwrap();
//! let objective = coverage_objective(&data).unwrap();
//! let k2 = CardinalityConstraint::new(2, 2).unwrap();
//!
//! let exact = greedy(&objective, &k2, None, &CallCounter::new()).unwrap();
//! let plan = SamplingPlan::uniform(objective.num_components(), 1.0).unwrap();
//! let batched =
//!     minibatch_greedy(&objective, &k2, &plan, InnerEngine::Naive, 7, None, &CallCounter::new())
//!         .unwrap();
//! assert_eq!(exact.solution, batched.solution);
//! ```

pub mod analysis;
pub mod constraints;
pub mod error;
pub mod functions;
pub mod objective;
pub mod optimize;
pub mod rng;
pub mod sampling;

pub use constraints::{
    empirical_p, CardinalityConstraint, ConstraintSystem, MatchingSystem, MatroidIntersection,
    PartitionMatroid,
};
pub use error::{Error, Result};
pub use functions::{
    coverage_objective, facility_location_objective, generate_smoothed_instance, lloyd_centers,
    modular_objective, normalize_singletons, BipartiteDataset, Metric, PointCloudDataset,
    SmoothedInstanceSpec, SmoothingModel,
};
pub use objective::{
    CallCounter, CallCounts, ComponentOracle, DecomposableObjective, GroundSet, Phase, SolutionSet,
};
pub use optimize::{
    brute_force_opt, greedy, lazy_greedy, minibatch_greedy, sparsifier_greedy, stochastic_greedy,
    Engine, EngineConfig, InnerEngine, RunReport, Schedule, TraceStep,
};
pub use sampling::{
    alpha_from_beta, alpha_from_theory, compute_weighted_probabilities, sample,
    uniform_probabilities, SamplingPlan, SamplingScheme, TheoryMode,
};
