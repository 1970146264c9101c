//! `gen`: synthetic datasets written as CSV plus a manifest.

use std::path::{Path, PathBuf};

use minibatch_core::functions::io::{write_bipartite, write_points, write_values};
use minibatch_core::functions::smoothed_values;
use minibatch_core::rng::trial_stream;
use minibatch_core::{BipartiteDataset, SmoothedInstanceSpec};
use rand::Rng;
use serde_json::json;

use crate::dataset::{default_centers, DatasetSpec};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

pub const MANIFEST: &str = "manifest.json";

pub struct Generated {
    pub data: PathBuf,
    pub manifest: Manifest,
    /// How to load the generated files back.
    pub spec: DatasetSpec,
}

fn prepare(out: &Path) -> CliResult<()> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))
}

fn finish(out: &Path, file: &str, manifest: Manifest, spec: DatasetSpec) -> CliResult<Generated> {
    manifest.write(&out.join(MANIFEST))?;
    Ok(Generated {
        data: out.join(file),
        manifest,
        spec,
    })
}

/// Singleton-value matrix of a smoothed instance, written as `values.csv`.
pub fn gen_smoothed(spec: &SmoothedInstanceSpec, out: &Path) -> CliResult<Generated> {
    prepare(out)?;
    let values = smoothed_values(spec)?;
    let file = "values.csv";
    write_values(&out.join(file), &values.rows).map_err(|e| CliError::io(&out.join(file), e))?;
    let manifest = Manifest {
        family: "values".into(),
        n: spec.n,
        num_components: spec.num_components,
        seed: spec.seed,
        files: vec![file.into()],
        preprocessing_calls: None,
        params: json!({
            "generator": "smoothed",
            "spec": spec,
            "designated": values.designated,
            "size_warning": values.size_warning,
        }),
    };
    finish(
        out,
        file,
        manifest,
        DatasetSpec::Values {
            path: out.join(file),
        },
    )
}

#[derive(Debug, Clone)]
pub struct PointsArgs {
    pub clusters: usize,
    pub per_cluster: usize,
    pub dim: usize,
    /// Half-width of the box around each cluster center.
    pub spread: f64,
    /// Centers used when the points are loaded as a facility-location instance.
    pub centers: usize,
    pub seed: u64,
}

impl Default for PointsArgs {
    fn default() -> Self {
        Self {
            clusters: 5,
            per_cluster: 200,
            dim: 2,
            spread: 5.0,
            centers: default_centers(),
            seed: 0,
        }
    }
}

/// Clustered points: cluster centers uniform in `[0, 100]^dim`, points uniform
/// in a box of half-width `spread` around their center.
pub fn gen_points(args: &PointsArgs, out: &Path) -> CliResult<Generated> {
    if args.clusters == 0 || args.per_cluster == 0 || args.dim == 0 {
        return Err(CliError::Config(
            "clusters, per-cluster and dim must be positive".into(),
        ));
    }
    prepare(out)?;
    let mut rng = trial_stream(args.seed, 0);
    let mut points = Vec::with_capacity(args.clusters * args.per_cluster);
    for _ in 0..args.clusters {
        let center: Vec<f64> = (0..args.dim)
            .map(|_| rng.random_range(0.0..100.0))
            .collect();
        for _ in 0..args.per_cluster {
            points.push(
                center
                    .iter()
                    .map(|c| c + args.spread * rng.random_range(-1.0..=1.0))
                    .collect(),
            );
        }
    }
    let file = "points.csv";
    write_points(&out.join(file), &points).map_err(|e| CliError::io(&out.join(file), e))?;
    let centers = args.centers.min(points.len());
    let manifest = Manifest {
        family: "facility".into(),
        n: centers,
        num_components: points.len(),
        seed: args.seed,
        files: vec![file.into()],
        preprocessing_calls: None,
        params: json!({
            "generator": "points",
            "clusters": args.clusters,
            "per_cluster": args.per_cluster,
            "dim": args.dim,
            "spread": args.spread,
        }),
    };
    let spec = DatasetSpec::Points {
        path: out.join(file),
        metric: minibatch_core::Metric::Manhattan,
        centers,
        lloyd_iterations: crate::dataset::default_lloyd_iterations(),
        center_seed: args.seed,
        exemplar: false,
    };
    finish(out, file, manifest, spec)
}

/// Random bipartite graph: every edge present independently with
/// probability `density`, and every left node gets at least one edge.
pub fn gen_coverage(
    left: usize,
    right: usize,
    density: f64,
    seed: u64,
    out: &Path,
) -> CliResult<Generated> {
    if !(0.0..=1.0).contains(&density) {
        return Err(CliError::Config(format!(
            "density must lie in [0,1], got {density}"
        )));
    }
    prepare(out)?;
    let mut rng = trial_stream(seed, 0);
    let mut edges = Vec::new();
    for u in 0..left {
        let forced = rng.random_range(0..right.max(1));
        for v in 0..right {
            if v == forced || rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    let data = BipartiteDataset::new(left, right, edges)?;
    let file = "bipartite.csv";
    write_bipartite(&out.join(file), &data).map_err(|e| CliError::io(&out.join(file), e))?;
    let manifest = Manifest {
        family: "coverage".into(),
        n: right,
        num_components: left,
        seed,
        files: vec![file.into()],
        preprocessing_calls: None,
        params: json!({ "generator": "coverage", "density": density, "edges": data.edges().len() }),
    };
    finish(
        out,
        file,
        manifest,
        DatasetSpec::Bipartite {
            path: out.join(file),
        },
    )
}
