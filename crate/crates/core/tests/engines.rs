mod common;

use common::*;
use minibatch_core::functions::{smoothed_values, SmoothedInstanceSpec, SmoothingModel};
use minibatch_core::optimize::stochastic_sample_size;
use minibatch_core::sampling::compute_weighted_probabilities;
use minibatch_core::*;
use rand::Rng;

fn k_system(n: usize, k: usize) -> CardinalityConstraint {
    CardinalityConstraint::new(n, k).unwrap()
}

#[test]
fn lazy_equals_greedy_on_random_instances() {
    let mut r = rng(1);
    for i in 0..200 {
        let n = r.random_range(2..=12);
        let big_n = r.random_range(1..=30);
        let k = r.random_range(1..=n);
        let obj = random_instance(&mut r, n, big_n);
        let (cn, cl) = (CallCounter::new(), CallCounter::new());
        let naive = greedy(&obj, &k_system(n, k), None, &cn).unwrap();
        let lazy = lazy_greedy(&obj, &k_system(n, k), None, &cl).unwrap();
        assert_eq!(naive.solution, lazy.solution, "instance {i}");
        assert!(cl.execution() <= cn.execution(), "instance {i}");
    }
}

#[test]
fn lazy_equals_greedy_under_matchings() {
    let mut r = rng(2);
    for i in 0..100 {
        let edges = r.random_range(1..=12);
        let sys = random_matching(&mut r, 7, edges);
        let obj = random_instance(&mut r, sys.ground_size(), 10);
        let c = CallCounter::new();
        let naive = greedy(&obj, &sys, None, &c).unwrap();
        let lazy = lazy_greedy(&obj, &sys, None, &c).unwrap();
        assert_eq!(naive.solution, lazy.solution, "instance {i}");
    }
}

#[test]
fn exhaustive_plans_degenerate_to_exact_engines() {
    let mut r = rng(3);
    for i in 0..50 {
        let n = r.random_range(2..=12);
        let big_n = r.random_range(1..=20);
        let k = r.random_range(1..=4.min(n));
        let obj = random_instance(&mut r, n, big_n);
        let sys = k_system(n, k);
        let c = CallCounter::new();
        let uniform = SamplingPlan::uniform(big_n, 1.0).unwrap();
        let weighted = SamplingPlan::new(
            compute_weighted_probabilities(&obj, &c).unwrap_or(vec![1.0; big_n]),
            1e9,
            SamplingScheme::Weighted,
        )
        .unwrap();
        for plan in [&uniform, &weighted] {
            assert!(plan.is_exhaustive(), "instance {i}");
            if !plan.is_exhaustive() {
                continue;
            }
            let exact = greedy(&obj, &sys, None, &c).unwrap();
            let seed = i as u64;
            let mb =
                minibatch_greedy(&obj, &sys, plan, InnerEngine::Naive, seed, None, &c).unwrap();
            assert_eq!(mb.solution, exact.solution);
            assert_eq!(mb.value, exact.value);
            for inner in [InnerEngine::Naive, InnerEngine::Lazy] {
                let sp = sparsifier_greedy(&obj, &sys, plan, inner, seed, None, &c).unwrap();
                assert_eq!(sp.solution, exact.solution);
            }
            let eps = InnerEngine::Stochastic { eps_s: 0.3 };
            let st = stochastic_greedy(&obj, &sys, 0.3, seed, None, &c).unwrap();
            assert_eq!(
                sparsifier_greedy(&obj, &sys, plan, eps, seed, None, &c)
                    .unwrap()
                    .solution,
                st.solution
            );
            assert_eq!(
                minibatch_greedy(&obj, &sys, plan, eps, seed, None, &c)
                    .unwrap()
                    .solution,
                st.solution
            );
        }
    }
}

#[test]
fn exact_greedy_gains_do_not_increase() {
    let mut r = rng(4);
    for _ in 0..100 {
        let n = r.random_range(2..=12);
        let obj = random_instance(&mut r, n, 15);
        let report = greedy(&obj, &k_system(n, n), None, &CallCounter::new()).unwrap();
        for w in report.trace.windows(2) {
            assert!(w[1].estimated_gain <= w[0].estimated_gain + 1e-9);
        }
    }
}

#[test]
fn naive_calls_respect_nnk() {
    let mut r = rng(5);
    for _ in 0..100 {
        let n = r.random_range(1..=12);
        let big_n = r.random_range(1..=40);
        let k = r.random_range(1..=n);
        let obj = random_instance(&mut r, n, big_n);
        let c = CallCounter::new();
        greedy(&obj, &k_system(n, k), None, &c).unwrap();
        assert!(c.execution() <= (big_n * n * k) as u64);
        assert_eq!(c.preprocessing(), 0);
    }
}

#[test]
fn cli_sized_call_bound() {
    let mut r = rng(6);
    let obj = random_coverage(&mut r, 10, 100, 0.2);
    let c = CallCounter::new();
    greedy(&obj, &k_system(10, 3), None, &c).unwrap();
    assert!(c.execution() <= 3000);
}

#[test]
fn greedy_meets_classic_guarantees() {
    let mut r = rng(7);
    let ratio = 1.0 - (-1f64).exp();
    for _ in 0..100 {
        let n = r.random_range(2..=10);
        let obj = random_instance(&mut r, n, 20);
        let k = r.random_range(1..=4.min(n));
        let c = CallCounter::new();
        let g = greedy(&obj, &k_system(n, k), None, &c).unwrap();
        let (_, opt) = brute_force_opt(&obj, &k_system(n, k), &c).unwrap();
        assert!(g.value >= ratio * opt - 1e-9);
    }
    for _ in 0..50 {
        let sys = random_matching(&mut r, 6, 9);
        let obj = random_instance(&mut r, sys.ground_size(), 20);
        let c = CallCounter::new();
        let g = greedy(&obj, &sys, None, &c).unwrap();
        let (_, opt) = brute_force_opt(&obj, &sys, &c).unwrap();
        assert!(g.value >= opt / 3.0 - 1e-9);
    }
}

#[test]
fn stochastic_greedy_on_coverage_example() {
    let obj = coverage_example();
    let sys = k_system(2, 2);
    let c = CallCounter::new();
    let (_, opt) = brute_force_opt(&obj, &sys, &c).unwrap();
    let eps = 0.1;
    let mean: f64 = (0..100)
        .map(|seed| {
            stochastic_greedy(&obj, &sys, eps, seed, None, &c)
                .unwrap()
                .value
        })
        .sum::<f64>()
        / 100.0;
    assert!(mean >= (1.0 - (-1f64).exp() - eps) * opt);
}

#[test]
fn stochastic_sample_is_capped() {
    assert_eq!(stochastic_sample_size(100, 10, 0.1), 24);
    let mut r = rng(8);
    let obj = random_coverage(&mut r, 100, 30, 0.05);
    let report =
        stochastic_greedy(&obj, &k_system(100, 10), 0.1, 1, None, &CallCounter::new()).unwrap();
    assert!(report.trace.iter().all(|s| s.evaluated == 24));
}

#[test]
fn sparsifier_on_large_model_two_instance() {
    let mut spec = SmoothedInstanceSpec::new(SmoothingModel::Two, 20, 10_000, 0.3, 10, 17);
    spec.mean_jitter = 0.8;
    let obj = smoothed_values(&spec).unwrap().into_objective().unwrap();
    let beta = 0.01;
    let plan = SamplingPlan::uniform(obj.num_components(), beta).unwrap();
    let sys = k_system(20, 5);
    let draws = 200;
    let mut support = 0usize;
    let mut sparse_calls = 0u64;
    for seed in 0..draws {
        let c = CallCounter::new();
        let r = sparsifier_greedy(&obj, &sys, &plan, InnerEngine::Naive, seed, None, &c).unwrap();
        support += r.trace[0].support;
        sparse_calls += c.execution();
    }
    let mean = support as f64 / draws as f64;
    // Binomial(10⁴, 0.01): standard deviation ≈ 9.95, so the mean of 200 draws has SE ≈ 0.7.
    assert!((mean - 100.0).abs() < 3.0 * 0.71, "{mean}");
    let c = CallCounter::new();
    greedy(&obj, &sys, None, &c).unwrap();
    assert!(sparse_calls / draws < c.execution());
}
