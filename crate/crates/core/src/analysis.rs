//! Validators and estimators: submodularity spot checks, curvature, the
//! empirical smoothing parameter `φ`, and Monte-Carlo checks of how well a
//! sampled function approximates the true marginal gains.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functions::{max_singleton, SmoothingModel};
use crate::objective::{CallCounter, DecomposableObjective, Phase, SolutionSet};
use crate::optimize::argmax;
use crate::rng::trial_stream;
use crate::sampling::SamplingPlan;

/// Absolute slack for the monotonicity and submodularity inequalities.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// Largest ground set for exact curvature.
pub const EXACT_CURVATURE_LIMIT: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub trials: usize,
    pub monotonicity_violations: usize,
    pub submodularity_violations: usize,
    /// Largest amount by which an inequality failed (0 when none did).
    pub worst_violation: f64,
    /// Trials where `F_S(e) = F_T(e)` within tolerance.
    pub tight: usize,
}

impl ViolationReport {
    pub fn is_clean(&self) -> bool {
        self.monotonicity_violations == 0 && self.submodularity_violations == 0
    }
}

/// Samples chains `S ⊆ T ⊊ E`, `e ∉ T`, and checks `F(S) ≤ F(T)`,
/// `F(S) ≤ F(S+e)` and `F_S(e) ≥ F_T(e)` up to [`CHECK_TOLERANCE`].
pub fn check_monotone_submodular(
    objective: &DecomposableObjective,
    trials: usize,
    seed: u64,
) -> ViolationReport {
    let n = objective.n();
    let outcomes: Vec<(f64, f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_stream(seed, t as u64);
            let density: f64 = rng.random();
            let mut big: Vec<usize> = (0..n).filter(|_| rng.random_bool(density)).collect();
            if big.len() == n {
                big.remove(rng.random_range(0..n));
            }
            let small: Vec<usize> = big
                .iter()
                .copied()
                .filter(|_| rng.random_bool(0.5))
                .collect();
            let outside: Vec<usize> = (0..n).filter(|e| !big.contains(e)).collect();
            let e = outside[rng.random_range(0..outside.len())];

            let f = |m: &[usize]| objective.value_uncounted(m);
            let with = |m: &[usize]| {
                let mut v = m.to_vec();
                v.push(e);
                v
            };
            let (fs, ft) = (f(&small), f(&big));
            let (fse, fte) = (f(&with(&small)), f(&with(&big)));
            let mono = (fs - ft).max(fs - fse).max(ft - fte);
            let sub = (fte - ft) - (fse - fs);
            (
                mono,
                sub,
                ((fse - fs) - (fte - ft)).abs() <= CHECK_TOLERANCE,
            )
        })
        .collect();
    let mut report = ViolationReport {
        trials,
        monotonicity_violations: 0,
        submodularity_violations: 0,
        worst_violation: 0.0,
        tight: 0,
    };
    for (mono, sub, tight) in outcomes {
        if mono > CHECK_TOLERANCE {
            report.monotonicity_violations += 1;
            report.worst_violation = report.worst_violation.max(mono);
        }
        if sub > CHECK_TOLERANCE {
            report.submodularity_violations += 1;
            report.worst_violation = report.worst_violation.max(sub);
        }
        report.tight += usize::from(tight);
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureMode {
    /// Minimum over every `(S, e)`; needs `n ≤ 15`.
    ExactSmall,
    /// Only `S = E \ {e}`: a lower bound in general, exact for submodular `F`.
    SingletonLowerBound,
}

/// `c = 1 − min_{S, e∉S, F(e)>0} F_S(e)/F(e)`, clamped to `[0, 1]`.
pub fn curvature(
    objective: &DecomposableObjective,
    mode: CurvatureMode,
    counter: &CallCounter,
) -> Result<f64> {
    let n = objective.n();
    let singles: Vec<f64> = (0..n)
        .map(|e| objective.eval_members(&[e], counter, Phase::Execution))
        .collect();
    if singles.iter().all(|&v| v <= 0.0) {
        return Err(Error::Degenerate("F(e) = 0 for every element".into()));
    }
    let mut min_ratio = f64::INFINITY;
    match mode {
        CurvatureMode::SingletonLowerBound => {
            let all: Vec<usize> = (0..n).collect();
            let full = objective.eval_members(&all, counter, Phase::Execution);
            for e in (0..n).filter(|&e| singles[e] > 0.0) {
                let rest: Vec<usize> = all.iter().copied().filter(|&x| x != e).collect();
                let gain = full - objective.eval_members(&rest, counter, Phase::Execution);
                min_ratio = min_ratio.min(gain / singles[e]);
            }
        }
        CurvatureMode::ExactSmall => {
            if n > EXACT_CURVATURE_LIMIT {
                return Err(Error::TooLarge {
                    n,
                    limit: EXACT_CURVATURE_LIMIT,
                });
            }
            let table: Vec<f64> = (0u32..1 << n)
                .map(|mask| {
                    let m: Vec<usize> = (0..n).filter(|&e| mask & (1 << e) != 0).collect();
                    objective.eval_members(&m, counter, Phase::Execution)
                })
                .collect();
            for mask in 0usize..1 << n {
                for e in (0..n).filter(|&e| mask & (1 << e) == 0 && singles[e] > 0.0) {
                    min_ratio = min_ratio.min((table[mask | 1 << e] - table[mask]) / singles[e]);
                }
            }
        }
    }
    Ok((1.0 - min_ratio).clamp(0.0, 1.0))
}

/// Both readings of the empirical smoothing parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    /// `min_e (1/N)Σᵢ fⁱ(e)`: the value that must hold for every element.
    pub model_one: f64,
    /// `max_e (1/N)Σᵢ fⁱ(e)`: the value that must hold for some element.
    pub model_two: f64,
}

/// Computes `(1/N)Σᵢ wᵢfⁱ(e)` for every `e` and reports its min and max.
/// The objective must already have singleton values in `[0, 1]`.
pub fn phi_report(objective: &DecomposableObjective) -> Result<PhiReport> {
    let max = max_singleton(objective);
    if max > 1.0 + 1e-12 {
        return Err(invalid(format!(
            "singleton values reach {max}; normalize the objective before estimating phi"
        )));
    }
    let big_n = objective.num_components() as f64;
    let means: Vec<f64> = (0..objective.n())
        .map(|e| objective.value_uncounted(&[e]) / big_n)
        .collect();
    Ok(PhiReport {
        model_one: means.iter().copied().fold(f64::INFINITY, f64::min),
        model_two: means.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Empirical `φ` under one model; see [`PhiReport`].
pub fn empirical_phi(objective: &DecomposableObjective, model: SmoothingModel) -> Result<f64> {
    let r = phi_report(objective)?;
    Ok(match model {
        SmoothingModel::One => r.model_one,
        SmoothingModel::Two => r.model_two,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// `|F̂_S(e) − F_S(e)| ≤ ε·F_S(e)`.
    Multiplicative,
    /// `|F̂_S(e) − F_S(e)| ≤ (ε/γ)·F(e)`.
    Additive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleQualityReport {
    pub mode: OracleMode,
    pub eps: f64,
    pub gamma: f64,
    pub trials: usize,
    /// Fraction of trials in which some candidate violated the bound.
    pub violation_rate: f64,
    /// Fraction of (trial, candidate) pairs that violated the bound.
    pub pair_violation_rate: f64,
    /// Mean over candidates of the concentration bound for a single pair.
    pub predicted_pair_bound: f64,
    /// Fraction of trials in which `F̂_S` and `F_S` disagree on the best candidate.
    pub argmax_mismatch_rate: f64,
    /// Largest `|F̂_S(e) − F_S(e)|` seen.
    pub worst_deviation: f64,
}

/// `min(1, 2·exp(−ε²·α·μ / (3·F(e))))`: the tail bound for
/// `|F̂_S(e) − F_S(e)| ≥ ε·μ` when `μ ≥ F_S(e)`.
pub fn concentration_bound(eps: f64, alpha: f64, mu: f64, singleton: f64) -> f64 {
    if singleton <= 0.0 {
        return 0.0;
    }
    (2.0 * (-(eps * eps) * alpha * mu / (3.0 * singleton)).exp()).min(1.0)
}

/// `|F̂_S(e) − F_S(e)|` for `trials` independent draws of `F̂` from the plan.
/// Trial `t` uses stream `(seed, t)`.
pub fn marginal_deviations(
    objective: &DecomposableObjective,
    plan: &SamplingPlan,
    set: &SolutionSet,
    e: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    objective.ground().check(e)?;
    if set.contains(e) {
        return Err(Error::AlreadyInSolution(e));
    }
    let with = set.with(e);
    let truth = objective.value_of(&with)? - objective.value_of(set.members())?;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let weights = plan.sample(&mut trial_stream(seed, t as u64));
            let sampled = objective.reweighted(&weights)?;
            let gain = sampled.value_uncounted(&with) - sampled.value_uncounted(set.members());
            Ok((gain - truth).abs())
        })
        .collect()
}

/// Repeatedly samples `F̂` and compares `F̂_S(e)` with `F_S(e)` for every `e ∉ S`.
#[allow(clippy::too_many_arguments)]
pub fn check_incremental_oracle(
    objective: &DecomposableObjective,
    plan: &SamplingPlan,
    set: &SolutionSet,
    mode: OracleMode,
    eps: f64,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<OracleQualityReport> {
    if trials < 100 {
        return Err(invalid("oracle checks need at least 100 trials"));
    }
    if eps.is_nan() || gamma.is_nan() || eps <= 0.0 || gamma <= 0.0 {
        return Err(invalid("eps and gamma must be positive"));
    }
    if plan.probabilities.len() != objective.num_components() {
        return Err(invalid("plan size does not match the objective"));
    }
    let n = objective.n();
    let base = objective.value_of(set.members())?;
    let outside: Vec<usize> = (0..n).filter(|&e| !set.contains(e)).collect();
    if outside.is_empty() {
        return Err(invalid("the set already contains every element"));
    }
    let gains: Vec<f64> = outside
        .iter()
        .map(|&e| objective.value_uncounted(&set.with(e)) - base)
        .collect();
    let singles: Vec<f64> = outside
        .iter()
        .map(|&e| objective.value_uncounted(&[e]))
        .collect();
    let thresholds: Vec<f64> = match mode {
        OracleMode::Multiplicative => gains.iter().map(|g| eps * g).collect(),
        OracleMode::Additive => singles.iter().map(|f| eps / gamma * f).collect(),
    };
    let mus: Vec<f64> = match mode {
        OracleMode::Multiplicative => gains.clone(),
        OracleMode::Additive => singles.iter().map(|f| f / gamma).collect(),
    };
    let predicted_pair_bound = mus
        .iter()
        .zip(&singles)
        .map(|(&mu, &f)| concentration_bound(eps, plan.alpha, mu, f))
        .sum::<f64>()
        / outside.len() as f64;
    let best_true = argmax(&gains);

    let per_trial: Vec<Result<(usize, f64, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let weights = plan.sample(&mut trial_stream(seed, t as u64));
            let sampled = objective.reweighted(&weights)?;
            let sampled_base = sampled.value_uncounted(set.members());
            let estimates: Vec<f64> = outside
                .iter()
                .map(|&e| sampled.value_uncounted(&set.with(e)) - sampled_base)
                .collect();
            let mut violations = 0;
            let mut worst: f64 = 0.0;
            for ((est, truth), thr) in estimates.iter().zip(&gains).zip(&thresholds) {
                let dev = (est - truth).abs();
                worst = worst.max(dev);
                if dev > *thr {
                    violations += 1;
                }
            }
            Ok((violations, worst, argmax(&estimates) != best_true))
        })
        .collect();

    let mut any = 0usize;
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    let mut worst_deviation: f64 = 0.0;
    for r in per_trial {
        let (v, w, m) = r?;
        any += usize::from(v > 0);
        pairs += v;
        mismatches += usize::from(m);
        worst_deviation = worst_deviation.max(w);
    }
    Ok(OracleQualityReport {
        mode,
        eps,
        gamma,
        trials,
        violation_rate: any as f64 / trials as f64,
        pair_violation_rate: pairs as f64 / (trials * outside.len()) as f64,
        predicted_pair_bound,
        argmax_mismatch_rate: mismatches as f64 / trials as f64,
        worst_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{
        coverage_objective, modular_objective, supermodular_fixture, BipartiteDataset,
    };
    use crate::sampling::SamplingScheme;

    fn coverage_example() -> DecomposableObjective {
        let data = BipartiteDataset::new(2, 2, vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        coverage_objective(&data).unwrap()
    }

    #[test]
    fn coverage_has_no_violations() {
        assert!(check_monotone_submodular(&coverage_example(), 1000, 1).is_clean());
    }

    #[test]
    fn supermodular_fixture_is_caught() {
        let r = check_monotone_submodular(&supermodular_fixture(6).unwrap(), 1000, 1);
        assert!(r.submodularity_violations > 0);
        assert!(r.worst_violation >= 2.0 - 1e-12);
    }

    #[test]
    fn modular_is_tight() {
        let obj = modular_objective(&[vec![1.0, 2.0, 3.0, 4.0], vec![0.5, 0.0, 2.0, 1.0]]).unwrap();
        let r = check_monotone_submodular(&obj, 500, 2);
        assert!(r.is_clean());
        assert_eq!(r.tight, 500);
    }

    #[test]
    fn curvature_values() {
        let c = CallCounter::new();
        let modular = modular_objective(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(
            curvature(&modular, CurvatureMode::ExactSmall, &c).unwrap(),
            0.0
        );
        assert_eq!(
            curvature(&modular, CurvatureMode::SingletonLowerBound, &c).unwrap(),
            0.0
        );
        let cov = coverage_example();
        assert_eq!(curvature(&cov, CurvatureMode::ExactSmall, &c).unwrap(), 1.0);
        assert_eq!(
            curvature(&cov, CurvatureMode::SingletonLowerBound, &c).unwrap(),
            1.0
        );
        let zero = modular_objective(&[vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            curvature(&zero, CurvatureMode::ExactSmall, &c),
            Err(Error::Degenerate(_))
        ));
        let big = modular_objective(&[vec![1.0; 16]]).unwrap();
        assert!(curvature(&big, CurvatureMode::ExactSmall, &c).is_err());
    }

    #[test]
    fn phi_constant_and_zero_column() {
        let half = modular_objective(&vec![vec![0.5; 4]; 3]).unwrap();
        let r = phi_report(&half).unwrap();
        assert_eq!((r.model_one, r.model_two), (0.5, 0.5));
        let holed = modular_objective(&[vec![0.5, 0.0, 1.0], vec![0.5, 0.0, 0.2]]).unwrap();
        assert_eq!(empirical_phi(&holed, SmoothingModel::One).unwrap(), 0.0);
        assert_eq!(empirical_phi(&holed, SmoothingModel::Two).unwrap(), 0.6);
        let raw = modular_objective(&[vec![2.0]]).unwrap();
        assert!(phi_report(&raw).is_err());
    }

    #[test]
    fn exhaustive_plan_never_violates() {
        let obj = coverage_example();
        let plan = SamplingPlan::uniform(2, 1.0).unwrap();
        let s = SolutionSet::new();
        let r = check_incremental_oracle(
            &obj,
            &plan,
            &s,
            OracleMode::Multiplicative,
            0.1,
            1.0,
            200,
            3,
        )
        .unwrap();
        assert_eq!(r.violation_rate, 0.0);
        assert_eq!(r.worst_deviation, 0.0);
    }

    #[test]
    fn identical_components_keep_the_ranking() {
        let obj = modular_objective(&vec![vec![1.0, 4.0, 2.0, 3.0]; 50]).unwrap();
        let plan = SamplingPlan::uniform(50, 0.2).unwrap();
        let s = SolutionSet::from_members([0]).unwrap();
        let r = check_incremental_oracle(&obj, &plan, &s, OracleMode::Additive, 0.5, 1.0, 300, 4)
            .unwrap();
        // Every sampled function is a multiple of F, so the best candidate never
        // changes while the sample is nonempty (β·N = 10, P(empty) ≈ 1e-5).
        assert_eq!(r.argmax_mismatch_rate, 0.0);
    }

    #[test]
    fn concentration_bound_shape() {
        assert_eq!(concentration_bound(0.5, 0.0, 1.0, 1.0), 1.0);
        assert!(concentration_bound(0.5, 1000.0, 1.0, 1.0) < 1e-10);
        assert_eq!(concentration_bound(0.5, 10.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn deviations_vanish_for_exhaustive_plan() {
        let obj = coverage_example();
        let plan = SamplingPlan::new(vec![0.5, 1.0], 2.0, SamplingScheme::Weighted).unwrap();
        let d = marginal_deviations(&obj, &plan, &SolutionSet::new(), 1, 50, 0).unwrap();
        assert!(d.iter().all(|&x| x == 0.0));
    }
}
