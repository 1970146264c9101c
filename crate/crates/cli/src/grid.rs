//! `run`: the (engine × scheme × β × k) experiment grid.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use minibatch_core::rng::derive_seed;
use minibatch_core::{CallCounter, DecomposableObjective, Engine, EngineConfig, SamplingPlan};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{EngineEntry, EngineKind, ExperimentConfig, SchemeName};
use crate::error::{CliError, CliResult};
use crate::plot::{write_svg, Axis, Series};

pub const REPORT_HEADER: &str = "engine,scheme,schedule,beta,k,rep_count,utility_mean,utility_rel_mean,utility_rel_std,exec_calls_rel_mean,total_calls_rel_mean";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub engine: EngineEntry,
    pub scheme: Option<SchemeName>,
    pub beta: Option<f64>,
    pub k: usize,
}

impl Cell {
    pub fn series(&self) -> String {
        match self.scheme {
            Some(s) => format!("{}/{}", self.engine, s.as_str()),
            None => self.engine.to_string(),
        }
    }

    fn schedule(&self) -> &'static str {
        match self.engine.kind {
            EngineKind::MiniBatch => "per_iteration",
            EngineKind::Sparsifier => "once",
            _ => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RepOutcome {
    pub value: f64,
    pub exec_calls: u64,
    pub prepro_calls: u64,
    pub early_exit: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Baseline {
    pub k: usize,
    pub value: f64,
    pub exec_calls: u64,
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub cell: Cell,
    pub reps: Vec<RepOutcome>,
    pub utility_mean: f64,
    pub utility_rel_mean: f64,
    pub utility_rel_std: f64,
    pub exec_calls_rel_mean: f64,
    pub total_calls_rel_mean: f64,
}

impl ReportRow {
    pub fn csv_line(&self) -> String {
        let c = &self.cell;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.engine,
            c.scheme.map_or("none", SchemeName::as_str),
            c.schedule(),
            c.beta.map(|b| b.to_string()).unwrap_or_default(),
            c.k,
            self.reps.len(),
            self.utility_mean,
            self.utility_rel_mean,
            self.utility_rel_std,
            self.exec_calls_rel_mean,
            self.total_calls_rel_mean
        )
    }
}

/// A panel series: name and `(beta, calls_rel, utility_rel)` points.
type PanelSeries = (String, Vec<(Option<f64>, f64, f64)>);

pub struct GridReport {
    pub rows: Vec<ReportRow>,
    pub baselines: Vec<Baseline>,
}

/// Weighted probabilities and the preprocessing calls charged to every run that uses them.
pub struct WeightedInput {
    pub probabilities: Vec<f64>,
    pub calls: u64,
}

/// Cells in output order: engines as listed, then schemes, betas, ks.
pub fn cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &engine in &cfg.engines {
        if engine.is_sampled() {
            for &scheme in &cfg.schemes {
                for &beta in &cfg.betas {
                    for &k in &cfg.ks {
                        out.push(Cell {
                            engine,
                            scheme: Some(scheme),
                            beta: Some(beta),
                            k,
                        });
                    }
                }
            }
        } else {
            for &k in &cfg.ks {
                out.push(Cell {
                    engine,
                    scheme: None,
                    beta: None,
                    k,
                });
            }
        }
    }
    out
}

fn engine_for(
    cell: &Cell,
    cfg: &ExperimentConfig,
    objective: &DecomposableObjective,
    weighted: Option<&WeightedInput>,
) -> CliResult<Engine> {
    let inner = cell.engine.inner_engine(cfg.eps_s);
    let plan = || -> CliResult<SamplingPlan> {
        let beta = cell.beta.expect("sampled cells carry a beta");
        Ok(match cell.scheme.expect("sampled cells carry a scheme") {
            SchemeName::Uniform => SamplingPlan::uniform(objective.num_components(), beta)?,
            SchemeName::Weighted => {
                let w = weighted.ok_or_else(|| {
                    CliError::Config("weighted scheme without probabilities".into())
                })?;
                SamplingPlan::weighted(w.probabilities.clone(), beta)?
            }
        })
    };
    Ok(match cell.engine.kind {
        EngineKind::Naive => Engine::Naive,
        EngineKind::Lazy => Engine::Lazy,
        EngineKind::Stochastic => Engine::Stochastic { eps_s: cfg.eps_s },
        EngineKind::MiniBatch => Engine::MiniBatch {
            plan: plan()?,
            inner,
        },
        EngineKind::Sparsifier => Engine::Sparsifier {
            plan: plan()?,
            inner,
        },
    })
}

fn randomized(cell: &Cell) -> bool {
    cell.engine.is_sampled() || cell.engine.uses_subsampling()
}

fn run_once(
    engine: &Engine,
    seed: u64,
    cfg: &ExperimentConfig,
    objective: &DecomposableObjective,
    k: usize,
) -> CliResult<(f64, u64, bool)> {
    let system = cfg.constraint.build(objective.n(), k)?;
    let counter = CallCounter::new();
    let report =
        EngineConfig::new(engine.clone(), seed).run(objective, system.as_ref(), &counter)?;
    Ok((report.value, report.calls.execution, report.early_exit))
}

fn mean(xs: impl Iterator<Item = f64>) -> (f64, usize) {
    let (mut s, mut n) = (0.0, 0);
    for x in xs {
        s += x;
        n += 1;
    }
    (s / n as f64, n)
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

pub fn run_grid(
    cfg: &ExperimentConfig,
    objective: &DecomposableObjective,
    weighted: Option<&WeightedInput>,
) -> CliResult<GridReport> {
    cfg.validate()?;
    if let Some(&k) = cfg.ks.iter().find(|&&k| k > objective.n()) {
        return Err(CliError::Config(format!(
            "k = {k} exceeds the ground set size {}",
            objective.n()
        )));
    }
    let needs_weighted = cfg.schemes.contains(&SchemeName::Weighted)
        && cfg.engines.iter().any(EngineEntry::is_sampled);
    if needs_weighted && weighted.is_none() {
        return Err(CliError::Config(
            "weighted scheme requested but no probabilities supplied".into(),
        ));
    }

    let baselines: Vec<Baseline> = cfg
        .ks
        .par_iter()
        .map(|&k| {
            let (value, exec_calls, _) = run_once(&Engine::Lazy, cfg.seed, cfg, objective, k)?;
            Ok(Baseline {
                k,
                value,
                exec_calls,
            })
        })
        .collect::<CliResult<_>>()?;

    let cells = cells(cfg);
    let rows = cells
        .par_iter()
        .enumerate()
        .map(|(index, cell)| {
            let engine = engine_for(cell, cfg, objective, weighted)?;
            let reps = if randomized(cell) { cfg.repetitions } else { 1 };
            let cell_seed = derive_seed(cfg.seed, &[index as u64]);
            let prepro = match cell.scheme {
                Some(SchemeName::Weighted) => weighted.map_or(0, |w| w.calls),
                _ => 0,
            };
            let outcomes = (0..reps)
                .map(|r| {
                    let (value, exec_calls, early_exit) = run_once(
                        &engine,
                        derive_seed(cell_seed, &[r as u64]),
                        cfg,
                        objective,
                        cell.k,
                    )?;
                    Ok(RepOutcome {
                        value,
                        exec_calls,
                        prepro_calls: prepro,
                        early_exit,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            let base = baselines
                .iter()
                .find(|b| b.k == cell.k)
                .expect("baseline per k");
            Ok(summarize(*cell, outcomes, base))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(GridReport { rows, baselines })
}

fn summarize(cell: Cell, reps: Vec<RepOutcome>, base: &Baseline) -> ReportRow {
    let rel: Vec<f64> = reps.iter().map(|r| ratio(r.value, base.value)).collect();
    let (utility_rel_mean, count) = mean(rel.iter().copied());
    let utility_rel_std = if count > 1 {
        (rel.iter()
            .map(|x| (x - utility_rel_mean).powi(2))
            .sum::<f64>()
            / (count - 1) as f64)
            .sqrt()
    } else {
        0.0
    };
    let base_calls = base.exec_calls as f64;
    ReportRow {
        cell,
        utility_mean: mean(reps.iter().map(|r| r.value)).0,
        utility_rel_mean,
        utility_rel_std,
        exec_calls_rel_mean: mean(reps.iter().map(|r| ratio(r.exec_calls as f64, base_calls))).0,
        total_calls_rel_mean: mean(
            reps.iter()
                .map(|r| ratio((r.exec_calls + r.prepro_calls) as f64, base_calls)),
        )
        .0,
        reps,
    }
}

impl GridReport {
    pub fn report_csv(&self) -> String {
        let mut s = String::from(REPORT_HEADER);
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.csv_line());
            s.push('\n');
        }
        s
    }

    /// Series of one panel for one k.
    fn panel(&self, k: usize, total: bool) -> Vec<PanelSeries> {
        let mut out: Vec<PanelSeries> = Vec::new();
        for row in self.rows.iter().filter(|r| r.cell.k == k) {
            let calls = if total {
                row.total_calls_rel_mean
            } else {
                row.exec_calls_rel_mean
            };
            let point = (row.cell.beta, calls, row.utility_rel_mean);
            let name = row.cell.series();
            match out.iter_mut().find(|(s, _)| *s == name) {
                Some((_, pts)) => pts.push(point),
                None => out.push((name, vec![point])),
            }
        }
        for (_, pts) in &mut out {
            pts.sort_by(|a, b| a.0.unwrap_or(0.0).total_cmp(&b.0.unwrap_or(0.0)));
        }
        out
    }

    /// Writes `report.csv` and one CSV per panel, plus SVGs when asked.
    /// Returns the paths written.
    pub fn write(&self, out: &Path, ks: &[usize], svg: bool) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
        let mut written = Vec::new();
        let mut put = |name: String, body: String| -> CliResult<()> {
            let path = out.join(name);
            std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
            Ok(())
        };
        put("report.csv".into(), self.report_csv())?;
        for &k in ks {
            for (tag, total) in [("exec", false), ("total", true)] {
                let panel = self.panel(k, total);
                let mut body = String::from("series,beta,calls_rel,utility_rel\n");
                for (series, pts) in &panel {
                    for (beta, x, y) in pts {
                        let beta = beta.map(|b| b.to_string()).unwrap_or_default();
                        writeln!(body, "{series},{beta},{x},{y}").expect("string write");
                    }
                }
                put(format!("panel_{tag}_k{k}.csv"), body)?;
                if svg {
                    let series: Vec<Series> = panel
                        .iter()
                        .map(|(name, pts)| Series {
                            name: name.clone(),
                            points: pts.iter().map(|p| (p.1, p.2)).collect(),
                        })
                        .collect();
                    let x = Axis {
                        label: if total {
                            "oracle calls incl. preprocessing (relative)"
                        } else {
                            "oracle calls excl. preprocessing (relative)"
                        },
                        log: !total,
                    };
                    let y = Axis {
                        label: "relative utility",
                        log: false,
                    };
                    put(
                        format!("panel_{tag}_k{k}.svg"),
                        write_svg(&format!("k = {k}"), &x, &y, &series),
                    )?;
                }
            }
        }
        Ok(written)
    }
}
