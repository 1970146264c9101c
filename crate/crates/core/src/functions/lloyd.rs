use rand::seq::index;
use serde::Serialize;

use super::facility::PointCloudDataset;
use crate::error::{invalid, Result};
use crate::objective::GroundSet;
use crate::rng::trial_stream;

#[derive(Debug, Clone, Serialize)]
pub struct LloydCenters {
    pub ground: GroundSet,
    pub centers: Vec<Vec<f64>>,
    /// Iterations actually run; fewer than requested when assignments converged.
    pub iterations: usize,
}

/// Lloyd's algorithm with `m` centers drawn uniformly without replacement
/// from the data. Assignment uses squared Euclidean distance with ties going
/// to the lower center index; a center whose cluster empties keeps its position.
pub fn lloyd_centers(
    data: &PointCloudDataset,
    m: usize,
    iterations: usize,
    seed: u64,
) -> Result<LloydCenters> {
    if m == 0 || m > data.len() {
        return Err(invalid(format!(
            "cannot pick {m} centers from {} points",
            data.len()
        )));
    }
    if iterations == 0 {
        return Err(invalid("Lloyd's algorithm needs at least one iteration"));
    }
    let points = data.points();
    let dim = data.dim();
    let mut rng = trial_stream(seed, 0);
    let mut centers: Vec<Vec<f64>> = index::sample(&mut rng, points.len(), m)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();

    let mut assignment = vec![usize::MAX; points.len()];
    let mut ran = 0;
    for _ in 0..iterations {
        ran += 1;
        let mut changed = false;
        for (p, slot) in points.iter().zip(assignment.iter_mut()) {
            let best = nearest(&centers, p);
            if *slot != best {
                *slot = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; m];
        let mut counts = vec![0usize; m];
        for (p, &a) in points.iter().zip(&assignment) {
            counts[a] += 1;
            sums[a].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        for ((center, sum), count) in centers.iter_mut().zip(sums).zip(counts) {
            if count > 0 {
                *center = sum.into_iter().map(|s| s / count as f64).collect();
            }
        }
    }
    Ok(LloydCenters {
        ground: GroundSet::new(m)?,
        centers,
        iterations: ran,
    })
}

fn nearest(centers: &[Vec<f64>], p: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centers.iter().enumerate() {
        let d: f64 = c.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}
