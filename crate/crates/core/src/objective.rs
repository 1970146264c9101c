//! Ground sets, decomposable objectives and oracle-call accounting.
//!
//! An objective is `F(S) = Σᵢ wᵢ·fⁱ(S)` over a ground set `{0, .., n-1}`.
//! One oracle call is one evaluation of one component `fⁱ` on one set, so
//! evaluating `F` costs as many calls as there are positive weights.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// The ground set `E = {0, .., n-1}` with optional unique labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(invalid("ground set must contain at least one element"));
        }
        Ok(Self { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(invalid(format!("duplicate element label {l:?}")));
            }
        }
        let mut ground = Self::new(labels.len())?;
        ground.labels = Some(labels);
        Ok(ground)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of element `e`, falling back to its index.
    pub fn label(&self, e: usize) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn check(&self, e: usize) -> Result<()> {
        if e < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: e,
                n: self.size,
            })
        }
    }
}

/// A set of elements that remembers insertion order (the greedy pick order).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    members: Vec<usize>,
}

impl SolutionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from `members`, rejecting duplicates.
    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::new();
        for e in members {
            set.insert(e)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, e: usize) -> Result<()> {
        if self.contains(e) {
            return Err(Error::AlreadyInSolution(e));
        }
        self.members.push(e);
        Ok(())
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.contains(&e)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending index order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    pub fn with(&self, e: usize) -> Vec<usize> {
        let mut m = Vec::with_capacity(self.members.len() + 1);
        m.extend_from_slice(&self.members);
        m.push(e);
        m
    }
}

impl FromIterator<usize> for SolutionSet {
    /// Collects elements, silently dropping repeats.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = Self::new();
        for e in iter {
            let _ = set.insert(e);
        }
        set
    }
}

/// One summand `fⁱ` of a decomposable objective.
///
/// Implementations must satisfy `value(&[]) == 0`, be monotone and
/// submodular, and be safe to evaluate from several threads at once. The
/// slice passed to `value` never contains duplicates and is not sorted.
pub trait ComponentOracle: Send + Sync {
    fn value(&self, members: &[usize]) -> f64;
}

impl<F> ComponentOracle for F
where
    F: Fn(&[usize]) -> f64 + Send + Sync,
{
    fn value(&self, members: &[usize]) -> f64 {
        self(members)
    }
}

/// Which counter an evaluation is charged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Preprocessing,
    Execution,
}

/// Counts component evaluations, split by phase. Safe to share across threads.
#[derive(Debug, Default)]
pub struct CallCounter {
    preprocessing: AtomicU64,
    execution: AtomicU64,
}

/// A snapshot of a [`CallCounter`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallCounts {
    pub preprocessing: u64,
    pub execution: u64,
}

impl CallCounts {
    pub fn total(&self) -> u64 {
        self.preprocessing + self.execution
    }
}

impl CallCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&self, phase: Phase, calls: u64) {
        let slot = match phase {
            Phase::Preprocessing => &self.preprocessing,
            Phase::Execution => &self.execution,
        };
        slot.fetch_add(calls, Ordering::Relaxed);
    }

    pub fn preprocessing(&self) -> u64 {
        self.preprocessing.load(Ordering::Relaxed)
    }

    pub fn execution(&self) -> u64 {
        self.execution.load(Ordering::Relaxed)
    }

    pub fn snapshot(&self) -> CallCounts {
        CallCounts {
            preprocessing: self.preprocessing(),
            execution: self.execution(),
        }
    }
}

/// `F = Σᵢ wᵢ·fⁱ` over a ground set.
///
/// Components are shared behind an `Arc`, so reweighting (as the sparsifier
/// and mini-batch engines do on every sample) copies only the weight vector.
#[derive(Clone)]
pub struct DecomposableObjective {
    ground: GroundSet,
    components: Arc<Vec<Box<dyn ComponentOracle>>>,
    weights: Vec<f64>,
    support: Vec<usize>,
}

impl fmt::Debug for DecomposableObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecomposableObjective")
            .field("n", &self.ground.size())
            .field("components", &self.components.len())
            .field("support", &self.support.len())
            .finish()
    }
}

impl DecomposableObjective {
    /// Objective with all weights equal to one.
    pub fn new(ground: GroundSet, components: Vec<Box<dyn ComponentOracle>>) -> Result<Self> {
        let weights = vec![1.0; components.len()];
        Self::with_weights(ground, components, weights)
    }

    pub fn with_weights(
        ground: GroundSet,
        components: Vec<Box<dyn ComponentOracle>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("an objective needs at least one component"));
        }
        Self::assemble(ground, Arc::new(components), weights)
    }

    fn assemble(
        ground: GroundSet,
        components: Arc<Vec<Box<dyn ComponentOracle>>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if weights.len() != components.len() {
            return Err(invalid(format!(
                "{} weights given for {} components",
                weights.len(),
                components.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid(format!(
                "weights must be finite and nonnegative, got {w}"
            )));
        }
        let support = weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            ground,
            components,
            weights,
            support,
        })
    }

    /// The same components with every weight multiplied by `factors[i]`.
    pub fn reweighted(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.weights.len() {
            return Err(invalid(format!(
                "{} factors given for {} components",
                factors.len(),
                self.weights.len()
            )));
        }
        let weights = self
            .weights
            .iter()
            .zip(factors)
            .map(|(w, f)| w * f)
            .collect();
        Self::assemble(self.ground.clone(), Arc::clone(&self.components), weights)
    }

    /// The same components with all weights scaled by `scale > 0`.
    pub fn scaled(&self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        self.reweighted(&vec![scale; self.weights.len()])
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    /// Number of components `N`.
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Indices of components with positive weight, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn component(&self, i: usize) -> &dyn ComponentOracle {
        self.components[i].as_ref()
    }

    fn check_members(&self, members: &[usize]) -> Result<()> {
        members.iter().try_for_each(|&e| self.ground.check(e))
    }

    /// `F(S)`; charges one call per positive-weight component.
    pub fn eval(&self, set: &SolutionSet, counter: &CallCounter, phase: Phase) -> Result<f64> {
        self.check_members(set.members())?;
        Ok(self.eval_members(set.members(), counter, phase))
    }

    /// `F(S+e) - F(S)`. With `cached` set to `F(S)` only `F(S+e)` is evaluated.
    pub fn marginal_gain(
        &self,
        set: &SolutionSet,
        e: usize,
        cached: Option<f64>,
        counter: &CallCounter,
        phase: Phase,
    ) -> Result<f64> {
        self.check_members(set.members())?;
        self.ground.check(e)?;
        if set.contains(e) {
            return Err(Error::AlreadyInSolution(e));
        }
        let base = match cached {
            Some(v) => v,
            None => self.eval_members(set.members(), counter, phase),
        };
        Ok(self.eval_members(&set.with(e), counter, phase) - base)
    }

    /// Unchecked evaluation used by the engines. Components are summed in
    /// ascending index order, so results never depend on thread scheduling.
    pub(crate) fn eval_members(
        &self,
        members: &[usize],
        counter: &CallCounter,
        phase: Phase,
    ) -> f64 {
        counter.add(phase, self.support.len() as u64);
        self.value_uncounted(members)
    }

    pub(crate) fn value_uncounted(&self, members: &[usize]) -> f64 {
        if members.is_empty() {
            return 0.0;
        }
        self.support
            .iter()
            .map(|&i| self.weights[i] * self.components[i].value(members))
            .sum()
    }

    /// Weighted singleton values `wᵢ·fⁱ(e)`, one row per support component,
    /// as `(component index, row)`. Costs `|support|·n` calls.
    pub fn singleton_rows(&self, counter: &CallCounter, phase: Phase) -> Vec<(usize, Vec<f64>)> {
        let n = self.n();
        counter.add(phase, (self.support.len() * n) as u64);
        self.support
            .iter()
            .map(|&i| {
                let w = self.weights[i];
                let c = &self.components[i];
                (i, (0..n).map(|e| w * c.value(&[e])).collect())
            })
            .collect()
    }

    /// True value of `members`, not charged to any counter. Used for
    /// reporting, where the measurement is not part of the algorithm.
    pub fn value_of(&self, members: &[usize]) -> Result<f64> {
        self.check_members(members)?;
        Ok(self.value_uncounted(members))
    }
}
