use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minibatch_core::{
    generate_smoothed_instance, greedy, lazy_greedy, minibatch_greedy, sparsifier_greedy,
    stochastic_greedy, CallCounter, CardinalityConstraint, DecomposableObjective, InnerEngine,
    SamplingPlan, SmoothedInstanceSpec, SmoothingModel,
};

fn instance(n: usize, big_n: usize) -> DecomposableObjective {
    let spec = SmoothedInstanceSpec::new(SmoothingModel::Two, n, big_n, 0.3, 10, 1);
    generate_smoothed_instance(&spec).unwrap()
}

fn engines(c: &mut Criterion) {
    let (n, k) = (50, 10);
    let mut group = c.benchmark_group("engines");
    group.sample_size(10);
    for big_n in [1_000, 10_000] {
        let obj = instance(n, big_n);
        let sys = CardinalityConstraint::new(n, k).unwrap();
        let plan = SamplingPlan::uniform(big_n, 0.01).unwrap();
        group.bench_with_input(BenchmarkId::new("naive", big_n), &obj, |b, obj| {
            b.iter(|| greedy(obj, &sys, None, &CallCounter::new()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lazy", big_n), &obj, |b, obj| {
            b.iter(|| lazy_greedy(obj, &sys, None, &CallCounter::new()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("stochastic", big_n), &obj, |b, obj| {
            b.iter(|| stochastic_greedy(obj, &sys, 0.1, 3, None, &CallCounter::new()).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("minibatch_uniform", big_n),
            &obj,
            |b, obj| {
                b.iter(|| {
                    minibatch_greedy(
                        obj,
                        &sys,
                        &plan,
                        InnerEngine::Naive,
                        3,
                        None,
                        &CallCounter::new(),
                    )
                    .unwrap()
                })
            },
        );
        group.bench_with_input(
            BenchmarkId::new("sparsifier_uniform", big_n),
            &obj,
            |b, obj| {
                b.iter(|| {
                    sparsifier_greedy(
                        obj,
                        &sys,
                        &plan,
                        InnerEngine::Lazy,
                        3,
                        None,
                        &CallCounter::new(),
                    )
                    .unwrap()
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
