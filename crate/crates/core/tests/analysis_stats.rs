mod common;

use common::*;
use minibatch_core::analysis::*;
use minibatch_core::*;
use rand::Rng;

#[test]
fn singleton_bound_never_exceeds_exact_curvature() {
    let mut r = rng(30);
    for _ in 0..100 {
        let n = r.random_range(2..9);
        let obj = random_instance(&mut r, n, 10);
        let c = CallCounter::new();
        let (Ok(exact), Ok(lower)) = (
            curvature(&obj, CurvatureMode::ExactSmall, &c),
            curvature(&obj, CurvatureMode::SingletonLowerBound, &c),
        ) else {
            continue;
        };
        assert!(lower <= exact + 1e-9);
        assert!((0.0..=1.0).contains(&exact));
    }
}

#[test]
fn phi_readings_are_ordered() {
    for seed in 0..20 {
        let model = if seed % 2 == 0 {
            SmoothingModel::One
        } else {
            SmoothingModel::Two
        };
        let spec = SmoothedInstanceSpec::new(model, 8, 200, 0.3, 5, seed);
        let obj = generate_smoothed_instance(&spec).unwrap();
        let report = phi_report(&obj).unwrap();
        assert!(report.model_one <= report.model_two);
        assert_eq!(
            empirical_phi(&obj, SmoothingModel::One).unwrap(),
            report.model_one
        );
    }
}

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|a, b| v[*a].total_cmp(&v[*b]));
        let mut ranks = vec![0.0; v.len()];
        for (r, i) in idx.into_iter().enumerate() {
            ranks[i] = r as f64;
        }
        ranks
    };
    let (rx, ry) = (rank(xs), rank(ys));
    let n = xs.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

#[test]
fn violation_rate_falls_as_alpha_grows() {
    let spec = SmoothedInstanceSpec::new(SmoothingModel::One, 10, 2000, 0.3, 5, 4);
    let obj = generate_smoothed_instance(&spec).unwrap();
    let set = SolutionSet::from_members([0, 1]).unwrap();
    let betas = [0.005, 0.01, 0.02, 0.05, 0.1];
    let rates: Vec<f64> = betas
        .iter()
        .map(|&b| {
            let plan = SamplingPlan::uniform(2000, b).unwrap();
            check_incremental_oracle(
                &obj,
                &plan,
                &set,
                OracleMode::Multiplicative,
                0.3,
                1.0,
                400,
                9,
            )
            .unwrap()
            .pair_violation_rate
        })
        .collect();
    let alphas: Vec<f64> = betas.iter().map(|b| b * 2000.0).collect();
    assert!(spearman(&alphas, &rates) < -0.8, "{rates:?}");
}

#[test]
fn larger_phi_does_not_raise_violation_rate() {
    let rate = |phi: f64| {
        let mut spec = SmoothedInstanceSpec::new(SmoothingModel::One, 10, 2000, phi, 5, 6);
        spec.mean_jitter = 0.0;
        let obj = generate_smoothed_instance(&spec).unwrap();
        let plan = SamplingPlan::uniform(2000, 0.01).unwrap();
        let set = SolutionSet::new();
        check_incremental_oracle(
            &obj,
            &plan,
            &set,
            OracleMode::Multiplicative,
            0.2,
            1.0,
            1000,
            3,
        )
        .unwrap()
        .pair_violation_rate
    };
    let (low, high) = (rate(0.2), rate(0.4));
    // Binomial standard error of a pair rate estimated from 10⁴ pairs is at most 0.005.
    assert!(high <= low + 0.015, "{low} -> {high}");
}

#[test]
fn violation_report_detects_supermodularity() {
    let obj = minibatch_core::functions::supermodular_fixture(5).unwrap();
    let report = check_monotone_submodular(&obj, 500, 1);
    assert!(report.submodularity_violations > 0);
    assert_eq!(report.monotonicity_violations, 0);
}

#[test]
fn oracle_check_rejects_few_trials() {
    let obj = coverage_example();
    let plan = SamplingPlan::uniform(2, 0.5).unwrap();
    let err = check_incremental_oracle(
        &obj,
        &plan,
        &SolutionSet::new(),
        OracleMode::Additive,
        0.1,
        1.0,
        10,
        0,
    );
    assert!(err.is_err());
}
