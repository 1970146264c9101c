//! Built-in objective families and dataset generators.

mod coverage;
mod facility;
pub mod io;
mod lloyd;
mod modular;
mod smoothed;

pub use coverage::{coverage_objective, BipartiteDataset};
pub use facility::{exemplar_objective, facility_location_objective, Metric, PointCloudDataset};
pub use lloyd::{lloyd_centers, LloydCenters};
pub use modular::{max_value_objective, modular_objective, supermodular_fixture};
pub use smoothed::{
    generate_smoothed_instance, smoothed_values, SmoothedInstanceSpec, SmoothedValues,
    SmoothingModel,
};

use crate::error::{Error, Result};
use crate::objective::DecomposableObjective;

/// Largest weighted singleton value `max_{i,e} wᵢ·fⁱ(e)`, not charged to any counter.
pub fn max_singleton(objective: &DecomposableObjective) -> f64 {
    let n = objective.n();
    objective
        .support()
        .iter()
        .flat_map(|&i| {
            let w = objective.weights()[i];
            let c = objective.component(i);
            (0..n).map(move |e| w * c.value(&[e]))
        })
        .fold(0.0, f64::max)
}

/// Rescales the objective so every singleton value lies in `[0, 1]`.
/// Returns the rescaled objective and the factor applied.
pub fn normalize_singletons(
    objective: &DecomposableObjective,
) -> Result<(DecomposableObjective, f64)> {
    let max = max_singleton(objective);
    if !max.is_finite() {
        return Err(Error::Degenerate("singleton values are not finite".into()));
    }
    if max <= 0.0 {
        return Err(Error::Degenerate("all singleton values are zero".into()));
    }
    if max == 1.0 {
        return Ok((objective.clone(), 1.0));
    }
    let scale = 1.0 / max;
    Ok((objective.scaled(scale)?, scale))
}
