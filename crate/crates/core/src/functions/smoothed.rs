//! Synthetic instances for the two smoothing models.
//!
//! Every singleton value `fⁱ(e)` is a random variable in `[0, 1]`. Components
//! are grouped into consecutive blocks of `d`; inside a block the values of an
//! element share a latent draw, across blocks everything is independent.
//! Model 1 gives every element a mean of at least `phi`; model 2 only
//! guarantees it for one designated element.
//!
//! Components are realized as max-value (nested weighted coverage) functions,
//! so the objective is monotone submodular and its singleton values are the
//! drawn numbers.

use log::warn;
use rand::seq::IndexedRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::modular::max_value_objective;
use crate::error::{invalid, Result};
use crate::objective::DecomposableObjective;
use crate::rng::trial_stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothingModel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl SmoothingModel {
    pub fn from_number(m: u8) -> Result<Self> {
        match m {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(invalid(format!("smoothing model must be 1 or 2, got {m}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothedInstanceSpec {
    pub model: SmoothingModel,
    /// Ground set size.
    pub n: usize,
    /// Number of components.
    pub num_components: usize,
    pub phi: f64,
    /// Dependency bound, the block size.
    pub d: usize,
    pub seed: u64,
    /// Half-width of the noise around each element's mean.
    #[serde(default = "default_spread")]
    pub spread: f64,
    /// Spreads element means over `[phi, 1]` (model 1) or `[other_mean, phi]`
    /// (model 2, non-designated elements); 0 puts every mean at the floor.
    #[serde(default = "default_jitter")]
    pub mean_jitter: f64,
    /// Mean of the non-designated elements in model 2 before jitter.
    #[serde(default = "default_other_mean")]
    pub other_mean: f64,
    /// Weight of the block-shared latent draw in each value, in `[0, 1]`.
    #[serde(default = "default_coupling")]
    pub coupling: f64,
}

fn default_spread() -> f64 {
    0.1
}
fn default_jitter() -> f64 {
    0.5
}
fn default_other_mean() -> f64 {
    0.01
}
fn default_coupling() -> f64 {
    0.5
}

impl SmoothedInstanceSpec {
    pub fn new(
        model: SmoothingModel,
        n: usize,
        num_components: usize,
        phi: f64,
        d: usize,
        seed: u64,
    ) -> Self {
        Self {
            model,
            n,
            num_components,
            phi,
            d,
            seed,
            spread: default_spread(),
            mean_jitter: default_jitter(),
            other_mean: default_other_mean(),
            coupling: default_coupling(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.num_components == 0 {
            return Err(invalid("smoothed instance needs n ≥ 1 and N ≥ 1"));
        }
        if !(0.0..=1.0).contains(&self.phi) {
            return Err(invalid(format!("phi must lie in [0,1], got {}", self.phi)));
        }
        if self.d == 0 || self.d > self.num_components {
            return Err(invalid(format!("d must lie in [1, N], got {}", self.d)));
        }
        for (name, v) in [
            ("spread", self.spread),
            ("mean_jitter", self.mean_jitter),
            ("other_mean", self.other_mean),
            ("coupling", self.coupling),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{name} must lie in [0,1], got {v}")));
            }
        }
        if self.model == SmoothingModel::Two && self.other_mean > self.phi {
            return Err(invalid("other_mean must not exceed phi"));
        }
        Ok(())
    }

    /// Whether `N ≥ (d/φ)·ln(n·d)` fails, the sample-size condition of model 1.
    pub fn below_model_one_size(&self) -> bool {
        if self.phi <= 0.0 {
            return true;
        }
        let need = (self.d as f64 / self.phi) * ((self.n * self.d) as f64).ln();
        (self.num_components as f64) < need
    }
}

/// Raw singleton values of a generated instance.
#[derive(Debug, Clone)]
pub struct SmoothedValues {
    /// `N` rows of `n` values.
    pub rows: Vec<Vec<f64>>,
    /// Target mean of every element.
    pub means: Vec<f64>,
    /// The element for which the model-2 guarantee holds.
    pub designated: Option<usize>,
    pub size_warning: bool,
}

impl SmoothedValues {
    pub fn into_objective(self) -> Result<DecomposableObjective> {
        max_value_objective(self.rows)
    }
}

/// Draws the singleton value matrix for `spec`. Deterministic in `spec.seed`.
pub fn smoothed_values(spec: &SmoothedInstanceSpec) -> Result<SmoothedValues> {
    spec.validate()?;
    let size_warning = spec.model == SmoothingModel::One && spec.below_model_one_size();
    if size_warning {
        warn!(
            "N = {} is below (d/phi)·ln(n·d) for d = {}, phi = {}, n = {}",
            spec.num_components, spec.d, spec.phi, spec.n
        );
    }
    let mut rng = trial_stream(spec.seed, 0);
    let (means, designated) = element_means(spec, &mut rng);
    let half_width: Vec<f64> = means
        .iter()
        .map(|&m| spec.spread.min(m).min(1.0 - m))
        .collect();

    let n = spec.n;
    let mut rows = Vec::with_capacity(spec.num_components);
    let mut shared = vec![0.0; n];
    for i in 0..spec.num_components {
        if i % spec.d == 0 {
            shared.iter_mut().for_each(|s| *s = symmetric(&mut rng));
        }
        let row = (0..n)
            .map(|e| {
                let noise = spec.coupling * shared[e] + (1.0 - spec.coupling) * symmetric(&mut rng);
                (means[e] + half_width[e] * noise).clamp(0.0, 1.0)
            })
            .collect();
        rows.push(row);
    }
    Ok(SmoothedValues {
        rows,
        means,
        designated,
        size_warning,
    })
}

/// Generates a smoothed instance as an objective.
pub fn generate_smoothed_instance(spec: &SmoothedInstanceSpec) -> Result<DecomposableObjective> {
    smoothed_values(spec)?.into_objective()
}

fn element_means(spec: &SmoothedInstanceSpec, rng: &mut impl RngCore) -> (Vec<f64>, Option<usize>) {
    match spec.model {
        SmoothingModel::One => {
            let m = (0..spec.n)
                .map(|_| spec.phi + spec.mean_jitter * rng.random::<f64>() * (1.0 - spec.phi))
                .collect();
            (m, None)
        }
        SmoothingModel::Two => {
            let elements: Vec<usize> = (0..spec.n).collect();
            let star = *elements.choose(rng).expect("n ≥ 1");
            let m = (0..spec.n)
                .map(|e| {
                    let u: f64 = rng.random();
                    if e == star {
                        spec.phi
                    } else {
                        spec.other_mean + spec.mean_jitter * u * (spec.phi - spec.other_mean)
                    }
                })
                .collect();
            (m, Some(star))
        }
    }
}

fn symmetric(rng: &mut impl RngCore) -> f64 {
    rng.random_range(-1.0..=1.0)
}
