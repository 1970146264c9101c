//! Command-line surface and dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use minibatch_core::{Metric, SmoothedInstanceSpec, SmoothingModel};

use crate::config::{EngineEntry, ExperimentConfig, SchemeName};
use crate::dataset::{default_centers, default_lloyd_iterations, DatasetSpec, BUILTINS};
use crate::error::{CliError, CliResult};
use crate::gen::{gen_coverage, gen_points, gen_smoothed, PointsArgs};
use crate::grid::{run_grid, WeightedInput};
use crate::probs::cached_probabilities;
use crate::validate::validate_objective;

#[derive(Debug, Parser)]
#[command(
    name = "minibatch",
    version,
    about = "Mini-batch and sparsified greedy maximization of decomposable submodular functions"
)]
pub struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML experiment config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Compute and cache weighted sampling probabilities.
    Probs(ProbsArgs),
    /// Run an experiment grid.
    Run(RunArgs),
    /// Check monotonicity, submodularity, curvature and phi.
    Validate(ValidateArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Singleton-value matrix under smoothing model 1 or 2.
    Smoothed {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        model: u8,
        #[arg(long)]
        n: usize,
        /// Number of components.
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        phi: f64,
        /// Dependency block size.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        spread: Option<f64>,
        #[arg(long)]
        mean_jitter: Option<f64>,
        #[arg(long)]
        other_mean: Option<f64>,
        #[arg(long)]
        coupling: Option<f64>,
    },
    /// Clustered point cloud.
    Points {
        #[arg(long, default_value_t = 5)]
        clusters: usize,
        #[arg(long, default_value_t = 200)]
        per_cluster: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 5.0)]
        spread: f64,
        /// Facility-location centers recorded for loading.
        #[arg(long, default_value_t = default_centers())]
        centers: usize,
    },
    /// Random bipartite coverage graph.
    Coverage {
        /// Left nodes (components).
        #[arg(long)]
        left: usize,
        /// Right nodes (elements).
        #[arg(long)]
        right: usize,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Manhattan,
    SquaredEuclidean,
}

#[derive(Debug, Clone, Args)]
#[group(id = "dataset", multiple = false)]
pub struct DatasetArgs {
    /// Built-in dataset name.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUILTINS))]
    pub builtin: Option<String>,
    /// Singleton-value matrix CSV.
    #[arg(long)]
    pub values: Option<PathBuf>,
    /// Bipartite edge list CSV.
    #[arg(long)]
    pub bipartite: Option<PathBuf>,
    /// Point cloud CSV.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PointOptions {
    #[arg(long, value_enum, default_value = "manhattan")]
    pub metric: MetricArg,
    #[arg(long, default_value_t = default_centers())]
    pub centers: usize,
    #[arg(long, default_value_t = default_lloyd_iterations())]
    pub lloyd_iterations: usize,
    /// Use the points themselves as the ground set.
    #[arg(long)]
    pub exemplar: bool,
}

#[derive(Debug, Args)]
pub struct ProbsArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub points: PointOptions,
    /// Cache file (default: <out>/probs.csv).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value = "weighted")]
    pub scheme: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub points: PointOptions,
    #[arg(long, value_delimiter = ',')]
    pub engines: Option<Vec<EngineEntry>>,
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<SchemeName>>,
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    #[arg(long)]
    pub repetitions: Option<usize>,
    #[arg(long)]
    pub eps_s: Option<f64>,
    #[arg(long)]
    pub probs_cache: Option<PathBuf>,
    /// Also render the panels as SVG.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub points: PointOptions,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

impl DatasetArgs {
    fn spec(&self, opts: &PointOptions, seed: u64) -> Option<DatasetSpec> {
        if let Some(name) = &self.builtin {
            return Some(DatasetSpec::Builtin { name: name.clone() });
        }
        if let Some(path) = &self.values {
            return Some(DatasetSpec::Values { path: path.clone() });
        }
        if let Some(path) = &self.bipartite {
            return Some(DatasetSpec::Bipartite { path: path.clone() });
        }
        self.points.as_ref().map(|path| DatasetSpec::Points {
            path: path.clone(),
            metric: match opts.metric {
                MetricArg::Manhattan => Metric::Manhattan,
                MetricArg::SquaredEuclidean => Metric::SquaredEuclidean,
            },
            centers: opts.centers,
            lloyd_iterations: opts.lloyd_iterations,
            center_seed: seed,
            exemplar: opts.exemplar,
        })
    }
}

/// Global settings after merging the config file and flags.
struct Context {
    config: ExperimentConfig,
    out: PathBuf,
    /// `--out` or the config named the directory, rather than the default.
    out_given: bool,
}

fn context(cli: &Cli) -> CliResult<Context> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(t) = cli.threads {
        config.threads = Some(t);
    }
    let given = cli.out.clone().or_else(|| config.out.clone());
    let out_given = given.is_some();
    let out = given.unwrap_or_else(|| PathBuf::from("out"));
    if let Some(t) = config.threads {
        if t == 0 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        // Fails only if a pool already exists, as in repeated in-process calls.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    Ok(Context {
        config,
        out,
        out_given,
    })
}

fn dataset_spec(ctx: &Context, args: &DatasetArgs, opts: &PointOptions) -> CliResult<DatasetSpec> {
    args.spec(opts, ctx.config.seed)
        .or_else(|| ctx.config.dataset.clone())
        .ok_or_else(|| CliError::Config("no dataset: pass --builtin, --values, --bipartite or --points, or set [dataset] in the config".into()))
}

/// Writes a line to stdout; a closed pipe (as with `| head`) is not an error.
fn emit(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print_json(value: &impl serde::Serialize) {
    emit(&serde_json::to_string_pretty(value).expect("serializable report"));
}

pub fn execute(cli: Cli) -> CliResult<()> {
    let ctx = context(&cli)?;
    match &cli.command {
        Command::Gen { kind } => cmd_gen(&ctx, kind),
        Command::Probs(args) => cmd_probs(&ctx, args),
        Command::Run(args) => cmd_run(ctx, args),
        Command::Validate(args) => cmd_validate(&ctx, args),
    }
}

fn cmd_gen(ctx: &Context, kind: &GenKind) -> CliResult<()> {
    let seed = ctx.config.seed;
    let generated = match kind {
        GenKind::Smoothed {
            model,
            n,
            big_n,
            phi,
            d,
            spread,
            mean_jitter,
            other_mean,
            coupling,
        } => {
            let mut spec = SmoothedInstanceSpec::new(
                SmoothingModel::from_number(*model)?,
                *n,
                *big_n,
                *phi,
                *d,
                seed,
            );
            spec.spread = spread.unwrap_or(spec.spread);
            spec.mean_jitter = mean_jitter.unwrap_or(spec.mean_jitter);
            spec.other_mean = other_mean.unwrap_or(spec.other_mean);
            spec.coupling = coupling.unwrap_or(spec.coupling);
            gen_smoothed(&spec, &ctx.out)?
        }
        GenKind::Points {
            clusters,
            per_cluster,
            dim,
            spread,
            centers,
        } => {
            let args = PointsArgs {
                clusters: *clusters,
                per_cluster: *per_cluster,
                dim: *dim,
                spread: *spread,
                centers: *centers,
                seed,
            };
            gen_points(&args, &ctx.out)?
        }
        GenKind::Coverage {
            left,
            right,
            density,
        } => gen_coverage(*left, *right, *density, seed, &ctx.out)?,
    };
    print_json(&generated.manifest);
    Ok(())
}

fn cmd_probs(ctx: &Context, args: &ProbsArgs) -> CliResult<()> {
    let scheme: SchemeName = args.scheme.parse().map_err(CliError::Config)?;
    if scheme == SchemeName::Uniform {
        info!("uniform probabilities need no preprocessing; nothing cached");
        print_json(&serde_json::json!({ "scheme": "uniform", "calls": 0, "cache": null }));
        return Ok(());
    }
    let spec = dataset_spec(ctx, &args.dataset, &args.points)?;
    let data = spec.load()?;
    let cache = args
        .cache
        .clone()
        .unwrap_or_else(|| ctx.out.join("probs.csv"));
    let outcome = cached_probabilities(&data.objective, data.family, ctx.config.seed, &cache)?;
    print_json(&outcome);
    Ok(())
}

fn weighted_input(
    config: &ExperimentConfig,
    objective: &minibatch_core::DecomposableObjective,
    family: &str,
) -> CliResult<WeightedInput> {
    match &config.probs_cache {
        Some(cache) => {
            let o = cached_probabilities(objective, family, config.seed, cache)?;
            Ok(WeightedInput {
                probabilities: o.probabilities,
                calls: o.recorded_calls,
            })
        }
        None => {
            let counter = minibatch_core::CallCounter::new();
            let probabilities =
                minibatch_core::compute_weighted_probabilities(objective, &counter)?;
            Ok(WeightedInput {
                probabilities,
                calls: counter.preprocessing(),
            })
        }
    }
}

fn cmd_run(mut ctx: Context, args: &RunArgs) -> CliResult<()> {
    let spec = dataset_spec(&ctx, &args.dataset, &args.points)?;
    let cfg = &mut ctx.config;
    cfg.dataset = Some(spec);
    if let Some(v) = &args.engines {
        cfg.engines = v.clone();
    }
    if let Some(v) = &args.schemes {
        cfg.schemes = v.clone();
    }
    if let Some(v) = &args.betas {
        cfg.betas = v.clone();
    }
    if let Some(v) = &args.ks {
        cfg.ks = v.clone();
    }
    if let Some(v) = args.repetitions {
        cfg.repetitions = v;
    }
    if let Some(v) = args.eps_s {
        cfg.eps_s = v;
    }
    if let Some(v) = &args.probs_cache {
        cfg.probs_cache = Some(v.clone());
    }
    cfg.svg |= args.svg;
    cfg.validate()?;
    let data = cfg.dataset.as_ref().expect("set above").load()?;
    let needs_weighted = cfg.schemes.contains(&SchemeName::Weighted)
        && cfg.engines.iter().any(EngineEntry::is_sampled);
    let weighted = if needs_weighted {
        Some(weighted_input(cfg, &data.objective, data.family)?)
    } else {
        None
    };
    let report = run_grid(cfg, &data.objective, weighted.as_ref())?;
    let written = report.write(&ctx.out, &cfg.ks, cfg.svg)?;
    write_run_record(&ctx.out, cfg, &report, weighted.as_ref().map(|w| w.calls))?;
    for path in written {
        emit(&path.display().to_string());
    }
    Ok(())
}

fn write_run_record(
    out: &Path,
    cfg: &ExperimentConfig,
    report: &crate::grid::GridReport,
    prepro: Option<u64>,
) -> CliResult<()> {
    let path = out.join("run.json");
    let record = serde_json::json!({
        "config": cfg,
        "baselines": report.baselines,
        "preprocessing_calls": prepro,
        "early_exits": report.rows.iter().map(|r| r.reps.iter().filter(|x| x.early_exit).count()).sum::<usize>(),
    });
    let text = serde_json::to_string_pretty(&record).map_err(|e| CliError::io(&path, e))? + "\n";
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
}

fn cmd_validate(ctx: &Context, args: &ValidateArgs) -> CliResult<()> {
    let spec = dataset_spec(ctx, &args.dataset, &args.points)?;
    let data = spec.load()?;
    let report = validate_objective(&data.objective, data.family, args.trials, ctx.config.seed)?;
    print_json(&report);
    if ctx.out_given {
        std::fs::create_dir_all(&ctx.out).map_err(|e| CliError::io(&ctx.out, e))?;
        let path = ctx.out.join("validation.json");
        let text =
            serde_json::to_string_pretty(&report).map_err(|e| CliError::io(&path, e))? + "\n";
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} monotonicity and {} submodularity violations in {} trials",
            report.monotonicity_violations, report.submodularity_violations, report.trials
        )))
    }
}
