use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::objective::{ComponentOracle, DecomposableObjective, GroundSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Manhattan,
    SquaredEuclidean,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::SquaredEuclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
        }
    }
}

/// Points of a common dimension `D ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudDataset {
    points: Vec<Vec<f64>>,
    metric: Metric,
}

impl PointCloudDataset {
    pub fn new(points: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| invalid("point cloud is empty"))?;
        if dim == 0 {
            return Err(invalid("points must have dimension at least 1"));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(invalid(format!(
                "point {i} has dimension {}, expected {dim}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("point coordinates must be finite"));
        }
        Ok(Self { points, metric })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `f_v(S) = max_e d(v,e) − min_{e∈S} d(v,e)`, where the min over the empty set
/// is taken to be `max_e d(v,e)`.
struct Facility {
    distances: Vec<f64>,
    farthest: f64,
}

impl ComponentOracle for Facility {
    fn value(&self, members: &[usize]) -> f64 {
        let nearest = members
            .iter()
            .map(|&e| self.distances[e])
            .fold(self.farthest, f64::min);
        self.farthest - nearest
    }
}

/// One component per data point; the ground set is `centers`.
pub fn facility_location_objective(
    data: &PointCloudDataset,
    centers: &[Vec<f64>],
) -> Result<DecomposableObjective> {
    if centers.is_empty() {
        return Err(invalid("facility location needs at least one center"));
    }
    if let Some((i, c)) = centers
        .iter()
        .enumerate()
        .find(|(_, c)| c.len() != data.dim())
    {
        return Err(invalid(format!(
            "center {i} has dimension {}, data has dimension {}",
            c.len(),
            data.dim()
        )));
    }
    let components = data
        .points
        .iter()
        .map(|v| {
            let distances: Vec<f64> = centers.iter().map(|c| data.metric.distance(v, c)).collect();
            let farthest = distances.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Box::new(Facility {
                distances,
                farthest,
            }) as Box<dyn ComponentOracle>
        })
        .collect();
    DecomposableObjective::new(GroundSet::new(centers.len())?, components)
}

/// Exemplar clustering: the ground set is the data itself.
pub fn exemplar_objective(data: &PointCloudDataset) -> Result<DecomposableObjective> {
    facility_location_objective(data, &data.points)
}
