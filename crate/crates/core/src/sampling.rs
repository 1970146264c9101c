//! Sampling probabilities, the per-component Bernoulli sampler, and the
//! conversions between a data budget `β` and the batch parameter `α`.

use std::fs::File;
use std::io::{BufWriter, Read};
use std::path::Path;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::objective::{CallCounter, DecomposableObjective, Phase};

/// Default constant in front of the theoretical `α` rules.
pub const DEFAULT_THEORY_CONSTANT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingScheme {
    Weighted,
    Uniform,
}

impl SamplingScheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Weighted => "weighted",
            Self::Uniform => "uniform",
        }
    }
}

/// Per-component probabilities `pᵢ` and the batch parameter `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub probabilities: Vec<f64>,
    pub alpha: f64,
    pub scheme: SamplingScheme,
}

impl SamplingPlan {
    pub fn new(probabilities: Vec<f64>, alpha: f64, scheme: SamplingScheme) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(invalid("sampling plan needs at least one component"));
        }
        if let Some(p) = probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(invalid(format!("probabilities must lie in [0,1], got {p}")));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(Self {
            probabilities,
            alpha,
            scheme,
        })
    }

    /// Uniform plan whose expected batch is `β·N` components.
    pub fn uniform(num_components: usize, beta: f64) -> Result<Self> {
        let p = uniform_probabilities(num_components)?;
        let alpha = alpha_from_beta(beta, &p, num_components)?;
        Self::new(p, alpha, SamplingScheme::Uniform)
    }

    /// Weighted plan from precomputed probabilities and a budget `β`.
    pub fn weighted(probabilities: Vec<f64>, beta: f64) -> Result<Self> {
        let n = probabilities.len();
        let alpha = alpha_from_beta(beta, &probabilities, n)?;
        Self::new(probabilities, alpha, SamplingScheme::Weighted)
    }

    /// Compensates for probabilities known only up to a factor `λ ∈ (0, 1]`
    /// (`p′ᵢ ≥ λ·pᵢ`) by scaling `α` by `1/λ`.
    pub fn with_approximation_factor(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(invalid(format!("lambda must lie in (0,1], got {lambda}")));
        }
        self.alpha /= lambda;
        Ok(self)
    }

    /// `Σᵢ min(1, α·pᵢ)`, the expected number of sampled components.
    pub fn expected_support(&self) -> f64 {
        self.probabilities
            .iter()
            .map(|&p| keep_probability(self.alpha, p))
            .sum()
    }

    /// Whether `α·pᵢ ≥ 1` for every component with `pᵢ > 0`, so every sample
    /// is `F` itself (a weighted `pᵢ = 0` component is zero on every singleton).
    pub fn is_exhaustive(&self) -> bool {
        self.probabilities
            .iter()
            .all(|&p| p == 0.0 || keep_probability(self.alpha, p) >= 1.0)
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> Vec<f64> {
        sample(self.alpha, &self.probabilities, rng)
    }
}

/// `pᵢ = max_{e : F(e) ≠ 0} wᵢfⁱ(e) / F(e)`, from one pass of singleton
/// evaluations charged to preprocessing. Zero-weight components get `pᵢ = 0`.
pub fn compute_weighted_probabilities(
    objective: &DecomposableObjective,
    counter: &CallCounter,
) -> Result<Vec<f64>> {
    let rows = objective.singleton_rows(counter, Phase::Preprocessing);
    let n = objective.n();
    let mut totals = vec![0.0; n];
    for (_, row) in &rows {
        totals.iter_mut().zip(row).for_each(|(t, v)| *t += v);
    }
    if totals.iter().all(|&t| t == 0.0) {
        return Err(Error::Degenerate("F(e) = 0 for every element".into()));
    }
    let mut p = vec![0.0; objective.num_components()];
    for (i, row) in rows {
        p[i] = row
            .iter()
            .zip(&totals)
            .filter(|(_, &t)| t != 0.0)
            .map(|(v, t)| (v / t).min(1.0))
            .fold(0.0, f64::max);
    }
    Ok(p)
}

/// `pᵢ = 1/N`. Needs no oracle calls.
pub fn uniform_probabilities(num_components: usize) -> Result<Vec<f64>> {
    if num_components == 0 {
        return Err(invalid("need at least one component"));
    }
    Ok(vec![1.0 / num_components as f64; num_components])
}

/// `α` with `α·Σpᵢ = β·N`.
pub fn alpha_from_beta(beta: f64, probabilities: &[f64], num_components: usize) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(invalid(format!("beta must lie in (0,1], got {beta}")));
    }
    let total: f64 = probabilities.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("probabilities sum to zero".into()));
    }
    Ok(beta * num_components as f64 / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum TheoryMode {
    /// Multiplicative oracle for curvature bounded by `c < 1`.
    Curvature { c: f64 },
    /// Additive `ε/γ` oracle; `γ = k` for cardinality, `γ = k·p` for a p-system.
    Additive { gamma: f64 },
}

/// `C·ln n / (ε²(1−c))` or `C·γ·ln n / ε²`.
pub fn alpha_from_theory(mode: TheoryMode, n: usize, eps: f64, constant: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    if constant.is_nan() || constant <= 0.0 {
        return Err(invalid("theory constant must be positive"));
    }
    if n == 0 {
        return Err(invalid("ground set must be nonempty"));
    }
    let log_n = (n as f64).ln();
    match mode {
        TheoryMode::Curvature { c } => {
            if !(0.0..1.0).contains(&c) {
                return Err(invalid(format!("curvature must lie in [0,1), got {c}")));
            }
            Ok(constant * log_n / (eps * eps * (1.0 - c)))
        }
        TheoryMode::Additive { gamma } => {
            if gamma.is_nan() || gamma <= 0.0 {
                return Err(invalid(format!("gamma must be positive, got {gamma}")));
            }
            Ok(constant * gamma * log_n / (eps * eps))
        }
    }
}

/// `min(1, α·p)`, snapping products within rounding error of 1 to 1 so that
/// `β = 1` with uniform probabilities keeps every component.
fn keep_probability(alpha: f64, p: f64) -> f64 {
    let keep = alpha * p;
    if keep >= 1.0 - 1e-12 {
        1.0
    } else {
        keep
    }
}

/// Keeps component `i` with probability `αᵢ = min(1, α·pᵢ)` and weight `1/αᵢ`;
/// all other weights are zero.
pub fn sample(alpha: f64, probabilities: &[f64], rng: &mut impl RngCore) -> Vec<f64> {
    probabilities
        .iter()
        .map(|&p| {
            let keep = keep_probability(alpha, p);
            if keep >= 1.0 {
                1.0
            } else if keep > 0.0 && rng.random::<f64>() < keep {
                1.0 / keep
            } else {
                0.0
            }
        })
        .collect()
}

/// Writes `component_index,p` rows with that header.
pub fn write_probabilities(path: &Path, probabilities: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    out.write_record(["component_index", "p"])?;
    for (i, p) in probabilities.iter().enumerate() {
        out.write_record([i.to_string(), format!("{p}")])?;
    }
    out.flush()?;
    Ok(())
}

pub fn parse_probabilities<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = rdr.headers()?.clone();
    if header.len() != 2 || &header[0] != "component_index" || &header[1] != "p" {
        return Err(invalid(
            "probability cache header must be \"component_index,p\"",
        ));
    }
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let i: usize = rec[0]
            .parse()
            .map_err(|_| invalid(format!("bad index on row {}", row + 2)))?;
        let p: f64 = rec[1]
            .parse()
            .map_err(|_| invalid(format!("bad p on row {}", row + 2)))?;
        if i != out.len() {
            return Err(invalid(format!(
                "expected component {} on row {}, got {i}",
                out.len(),
                row + 2
            )));
        }
        out.push(p);
    }
    Ok(out)
}

pub fn read_probabilities(path: &Path) -> Result<Vec<f64>> {
    parse_probabilities(File::open(path)?)
}
