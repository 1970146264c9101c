//! `validate`: checks the modeling assumptions on a dataset.

use minibatch_core::analysis::{check_monotone_submodular, curvature, phi_report, CurvatureMode};
use minibatch_core::functions::max_singleton;
use minibatch_core::{normalize_singletons, CallCounter, DecomposableObjective};
use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub family: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub num_components: usize,
    pub trials: usize,
    pub monotonicity_violations: usize,
    pub submodularity_violations: usize,
    pub worst_violation: f64,
    /// `None` when every singleton value is zero.
    pub curvature_lower_bound: Option<f64>,
    /// Factor applied before estimating phi; 1 when singleton values already lie in `[0, 1]`.
    pub normalization_scale: Option<f64>,
    /// `min_e (1/N)Σᵢ fⁱ(e)`.
    pub phi_model_one: Option<f64>,
    /// `max_e (1/N)Σᵢ fⁱ(e)`.
    pub phi_model_two: Option<f64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_violations == 0 && self.submodularity_violations == 0
    }
}

pub fn validate_objective(
    objective: &DecomposableObjective,
    family: &str,
    trials: usize,
    seed: u64,
) -> CliResult<ValidationReport> {
    let checks = check_monotone_submodular(objective, trials.max(1), seed);
    let curvature_lower_bound = curvature(
        objective,
        CurvatureMode::SingletonLowerBound,
        &CallCounter::new(),
    )
    .ok();
    let (normalization_scale, phi) = if max_singleton(objective) <= 1.0 {
        (Some(1.0), Some(phi_report(objective)?))
    } else {
        match normalize_singletons(objective) {
            Ok((normed, scale)) => (Some(scale), Some(phi_report(&normed)?)),
            Err(_) => (None, None),
        }
    };
    Ok(ValidationReport {
        family: family.into(),
        n: objective.n(),
        num_components: objective.num_components(),
        trials: checks.trials,
        monotonicity_violations: checks.monotonicity_violations,
        submodularity_violations: checks.submodularity_violations,
        worst_violation: checks.worst_violation,
        curvature_lower_bound,
        normalization_scale,
        phi_model_one: phi.as_ref().map(|p| p.model_one),
        phi_model_two: phi.as_ref().map(|p| p.model_two),
    })
}
