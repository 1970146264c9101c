#![allow(dead_code)]

use minibatch_core::functions::{
    coverage_objective, facility_location_objective, modular_objective,
};
use minibatch_core::{
    BipartiteDataset, DecomposableObjective, MatchingSystem, Metric, PointCloudDataset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coverage instance with `n` right nodes and `big_n` left nodes; every
/// left node gets at least one edge.
pub fn random_coverage(
    rng: &mut impl Rng,
    n: usize,
    big_n: usize,
    density: f64,
) -> DecomposableObjective {
    let mut edges = Vec::new();
    for u in 0..big_n {
        edges.push((u, rng.random_range(0..n)));
        for v in 0..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    coverage_objective(&BipartiteDataset::new(big_n, n, edges).unwrap()).unwrap()
}

/// Integer-valued modular instance.
pub fn random_modular(rng: &mut impl Rng, n: usize, big_n: usize) -> DecomposableObjective {
    let rows: Vec<Vec<f64>> = (0..big_n)
        .map(|_| (0..n).map(|_| rng.random_range(0..10) as f64).collect())
        .collect();
    modular_objective(&rows).unwrap()
}

/// Facility location on integer grid points with Manhattan distance, so all
/// values are exact integers.
pub fn random_facility(rng: &mut impl Rng, n: usize, big_n: usize) -> DecomposableObjective {
    let pt = |rng: &mut dyn rand::RngCore| {
        vec![
            rng.random_range(0..20) as f64,
            rng.random_range(0..20) as f64,
        ]
    };
    let data =
        PointCloudDataset::new((0..big_n).map(|_| pt(rng)).collect(), Metric::Manhattan).unwrap();
    let centers: Vec<Vec<f64>> = (0..n).map(|_| pt(rng)).collect();
    facility_location_objective(&data, &centers).unwrap()
}

/// Any of the integer-valued families above.
pub fn random_instance(rng: &mut impl Rng, n: usize, big_n: usize) -> DecomposableObjective {
    match rng.random_range(0..3) {
        0 => random_coverage(rng, n, big_n, 0.25),
        1 => random_modular(rng, n, big_n),
        _ => random_facility(rng, n, big_n),
    }
}

/// Random graph on `vertices` nodes with `edges` distinct edges.
pub fn random_matching(rng: &mut impl Rng, vertices: usize, edges: usize) -> MatchingSystem {
    let mut all: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
        .collect();
    let mut chosen = Vec::new();
    while chosen.len() < edges && !all.is_empty() {
        chosen.push(all.swap_remove(rng.random_range(0..all.len())));
    }
    MatchingSystem::new(vertices, chosen).unwrap()
}

/// The coverage example: left {u1, u2}, right {s1, s2}, edges u1–s1, u2–s1, u2–s2.
pub fn coverage_example() -> DecomposableObjective {
    coverage_objective(&BipartiteDataset::new(2, 2, vec![(0, 0), (1, 0), (1, 1)]).unwrap()).unwrap()
}
