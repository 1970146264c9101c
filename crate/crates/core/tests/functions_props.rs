mod common;

use common::*;
use minibatch_core::analysis::{check_monotone_submodular, curvature, CurvatureMode};
use minibatch_core::functions::supermodular_fixture;
use minibatch_core::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn builtin_families_are_monotone_submodular() {
    let mut r = rng(20);
    let spec = SmoothedInstanceSpec::new(SmoothingModel::Two, 10, 40, 0.3, 4, 2);
    let data = PointCloudDataset::new(
        (0..30)
            .map(|_| vec![r.random::<f64>(), r.random::<f64>()])
            .collect(),
        Metric::SquaredEuclidean,
    )
    .unwrap();
    let centers = lloyd_centers(&data, 6, 20, 1).unwrap().centers;
    let objectives = [
        random_coverage(&mut r, 12, 30, 0.2),
        random_modular(&mut r, 12, 30),
        random_facility(&mut r, 12, 30),
        generate_smoothed_instance(&spec).unwrap(),
        facility_location_objective(&data, &centers).unwrap(),
    ];
    for (i, obj) in objectives.iter().enumerate() {
        let report = check_monotone_submodular(obj, 1000, i as u64);
        assert!(report.is_clean(), "family {i}: {report:?}");
    }
    assert!(!check_monotone_submodular(&supermodular_fixture(6).unwrap(), 1000, 0).is_clean());
}

#[test]
fn coverage_counts_covered_left_nodes() {
    let mut r = rng(21);
    for _ in 0..50 {
        let (left, right) = (r.random_range(1..20), r.random_range(1..10));
        let edges: Vec<(usize, usize)> = (0..r.random_range(0..40))
            .map(|_| (r.random_range(0..left), r.random_range(0..right)))
            .collect();
        let data = BipartiteDataset::new(left, right, edges.clone()).unwrap();
        let obj = coverage_objective(&data).unwrap();
        let set: Vec<usize> = (0..right).filter(|_| r.random_bool(0.5)).collect();
        let covered = (0..left)
            .filter(|u| edges.iter().any(|(a, b)| a == u && set.contains(b)))
            .count();
        let value = obj.value_of(&set).unwrap();
        assert_eq!(value, covered as f64);
        assert!(value <= left as f64);
    }
}

#[test]
fn normalization_preserves_greedy_choices() {
    let mut r = rng(22);
    for _ in 0..50 {
        let n = r.random_range(2..10);
        let obj = random_instance(&mut r, n, 20);
        let Ok((normed, scale)) = normalize_singletons(&obj) else {
            continue;
        };
        assert!(scale > 0.0);
        let sys = CardinalityConstraint::new(n, n.min(3)).unwrap();
        let c = CallCounter::new();
        let a = greedy(&obj, &sys, None, &c).unwrap();
        let b = greedy(&normed, &sys, None, &c).unwrap();
        assert_eq!(a.solution, b.solution);
        assert!((b.value / scale - a.value).abs() <= 1e-9 * a.value.max(1.0));
    }
}

/// Facility value recomputed from coordinates.
fn facility_value(points: &[Vec<f64>], centers: &[Vec<f64>], set: &[usize]) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>();
    points
        .iter()
        .map(|p| {
            let far = centers.iter().map(|c| d(p, c)).fold(0.0, f64::max);
            let near = set.iter().map(|&e| d(p, &centers[e])).fold(far, f64::min);
            far - near
        })
        .sum()
}

#[test]
fn facility_curvature_matches_brute_force() {
    let mut r = rng(23);
    for _ in 0..20 {
        let n = r.random_range(2..7);
        let pt = |r: &mut rand_chacha::ChaCha8Rng| {
            vec![r.random_range(0..10) as f64, r.random_range(0..10) as f64]
        };
        let points: Vec<Vec<f64>> = (0..15).map(|_| pt(&mut r)).collect();
        let centers: Vec<Vec<f64>> = (0..n).map(|_| pt(&mut r)).collect();
        let data = PointCloudDataset::new(points.clone(), Metric::Manhattan).unwrap();
        let obj = facility_location_objective(&data, &centers).unwrap();
        let singles: Vec<f64> = (0..n)
            .map(|e| facility_value(&points, &centers, &[e]))
            .collect();
        if singles.iter().all(|v| *v == 0.0) {
            continue;
        }
        let mut min_ratio = f64::INFINITY;
        for mask in 0..1usize << n {
            let set: Vec<usize> = (0..n).filter(|e| mask >> e & 1 == 1).collect();
            let base = facility_value(&points, &centers, &set);
            for e in (0..n).filter(|e| mask >> e & 1 == 0 && singles[*e] > 0.0) {
                let mut with = set.clone();
                with.push(e);
                min_ratio =
                    min_ratio.min((facility_value(&points, &centers, &with) - base) / singles[e]);
            }
        }
        let expected = (1.0 - min_ratio).clamp(0.0, 1.0);
        let c = CallCounter::new();
        let exact = curvature(&obj, CurvatureMode::ExactSmall, &c).unwrap();
        assert!((exact - expected).abs() < 1e-9);
        let lower = curvature(&obj, CurvatureMode::SingletonLowerBound, &c).unwrap();
        assert!((lower - exact).abs() < 1e-9);
    }
}

#[test]
fn modular_functions_have_zero_curvature() {
    let mut r = rng(24);
    let obj = random_modular(&mut r, 6, 10);
    if (0..6).any(|e| obj.value_of(&[e]).unwrap() > 0.0) {
        assert_eq!(
            curvature(&obj, CurvatureMode::ExactSmall, &CallCounter::new()).unwrap(),
            0.0
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_is_sum_of_weighted_components(seed in any::<u64>(), mask in 0u32..256) {
        let mut r = rng(seed);
        let obj = random_instance(&mut r, 8, 10);
        let set: Vec<usize> = (0..8).filter(|e| mask >> e & 1 == 1).collect();
        let sum: f64 = (0..obj.num_components())
            .map(|i| obj.weights()[i] * obj.component(i).value(&set))
            .sum();
        prop_assert!((obj.value_of(&set).unwrap() - sum).abs() < 1e-9);
    }

    #[test]
    fn counted_eval_charges_support(seed in any::<u64>()) {
        let mut r = rng(seed);
        let obj = random_instance(&mut r, 5, 12);
        let c = CallCounter::new();
        let set = SolutionSet::from_members([0, 2]).unwrap();
        obj.eval(&set, &c, Phase::Execution).unwrap();
        prop_assert_eq!(c.execution(), obj.support().len() as u64);
    }
}
