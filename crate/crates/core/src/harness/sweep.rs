//! Instance sweeps and the comparisons built on them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::io::{read_csv, run_rows, write_csv, RunRow};
use super::stats::{mean, median, spearman};
use crate::adapt::{build_pool, grow_and_optimize, run_standard_qaoa, Algorithm, RunRecord};
use crate::error::{Error, Result};
use crate::problem::{
    brute_force, build_hamiltonian, generate_instance, CostHamiltonian, GroundTruth, InstanceFile,
    WeightedGraph,
};
use crate::resources::{
    resources_to_threshold, summarize_threshold, ThresholdSummary, CONVERGENCE_THRESHOLD,
};

#[derive(Debug, Clone)]
pub struct PreparedInstance {
    pub id: usize,
    pub seed: u64,
    pub graph: WeightedGraph,
    pub hamiltonian: CostHamiltonian,
    pub truth: GroundTruth,
}

pub fn instance_file_name(id: usize) -> String {
    format!("instance_{id:04}.json")
}

/// Instance `id` of a sweep: read from `instances_dir` when set, otherwise
/// generated from seed `base_seed + id`. The Hamiltonian carries the field
/// only in symmetry-breaking mode.
pub fn prepare_instance(config: &ExperimentConfig, id: usize) -> Result<PreparedInstance> {
    let seed = config.base_seed.wrapping_add(id as u64);
    let file = match &config.instances_dir {
        Some(dir) => InstanceFile::read(&dir.join(instance_file_name(id)))?,
        None => {
            let graph = generate_instance(config.n_qubits, config.degree(), seed)?;
            InstanceFile::new(&graph, config.degree(), seed, config.f)
        }
    };
    if file.n != config.n_qubits {
        return Err(Error::Configuration(format!(
            "instance {id} has {} vertices, config expects {}",
            file.n, config.n_qubits
        )));
    }
    if let Some(out) = &config.out {
        file.write(&out.join("instances").join(instance_file_name(id)))?;
    }
    let graph = file.graph()?;
    let hamiltonian = build_hamiltonian(&graph, config.mode.field(file.f))?;
    let truth = brute_force(&hamiltonian, graph.n_vertices)?;
    Ok(PreparedInstance {
        id,
        seed: file.seed,
        graph,
        hamiltonian,
        truth,
    })
}

pub fn run_instance(config: &ExperimentConfig, inst: &PreparedInstance) -> Result<RunRecord> {
    let settings = config.run_settings();
    let mut record = match config.algo {
        Algorithm::Adapt => {
            let pool = build_pool(config.n_qubits, config.pool)?;
            grow_and_optimize(&inst.hamiltonian, &inst.truth, &pool, &settings)?
        }
        Algorithm::Qaoa => run_standard_qaoa(&inst.hamiltonian, &inst.truth, &settings)?,
    };
    record.instance_id = inst.id;
    Ok(record)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub layer: usize,
    pub n_instances: usize,
    pub mean_norm_error: f64,
    pub median_norm_error: f64,
    pub mean_ent_middle: f64,
    pub median_ent_middle: f64,
    pub mean_ent_single_avg: f64,
    pub median_ent_single_avg: f64,
}

/// Per-layer mean and median across instances, for layers `1..`.
pub fn aggregate_rows(runs: &[Vec<RunRow>]) -> Vec<AggregateRow> {
    let mut by_layer: BTreeMap<usize, Vec<&RunRow>> = BTreeMap::new();
    for run in runs {
        for row in run.iter().filter(|r| r.layer >= 1) {
            by_layer.entry(row.layer).or_default().push(row);
        }
    }
    by_layer
        .into_iter()
        .map(|(layer, rows)| {
            let col = |f: fn(&RunRow) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let err = col(|r| r.norm_error);
            let mid = col(|r| r.ent_middle);
            let single = col(|r| r.ent_single_avg);
            AggregateRow {
                layer,
                n_instances: rows.len(),
                mean_norm_error: mean(&err),
                median_norm_error: median(&err),
                mean_ent_middle: mean(&mid),
                median_ent_middle: median(&mid),
                mean_ent_single_avg: mean(&single),
                median_ent_single_avg: median(&single),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFailure {
    pub instance_id: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub config: ExperimentConfig,
    /// Successful runs in instance order.
    pub records: Vec<RunRecord>,
    pub failures: Vec<InstanceFailure>,
    pub aggregate: Vec<AggregateRow>,
}

impl SweepOutcome {
    pub fn record(&self, instance_id: usize) -> Option<&RunRecord> {
        self.records.iter().find(|r| r.instance_id == instance_id)
    }

    pub fn threshold_summary(&self, threshold: f64) -> ThresholdSummary {
        let counts: Vec<_> = self
            .records
            .iter()
            .map(|r| resources_to_threshold(r, threshold))
            .collect();
        summarize_threshold(&counts)
    }

    pub fn sweep_dir(&self) -> Option<PathBuf> {
        self.config
            .out
            .as_ref()
            .map(|o| o.join(self.config.label()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub algo: String,
    pub mode: String,
    pub pool: String,
    pub mean_cnot: f64,
    pub std_cnot: f64,
    pub mean_params: f64,
    pub std_params: f64,
    pub n_excluded: usize,
}

pub fn threshold_row(outcome: &SweepOutcome, threshold: f64) -> ThresholdRow {
    let s = outcome.threshold_summary(threshold);
    let c = &outcome.config;
    ThresholdRow {
        algo: c.algo.to_string(),
        mode: c.mode.to_string(),
        pool: match c.algo {
            Algorithm::Adapt => c.pool.to_string(),
            Algorithm::Qaoa => "none".into(),
        },
        mean_cnot: s.mean_cnot,
        std_cnot: s.std_cnot,
        mean_params: s.mean_params,
        std_params: s.std_params,
        n_excluded: s.n_excluded,
    }
}

pub(crate) fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::Configuration(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs every instance of `config` and, when an output directory is set,
/// writes per-instance run CSVs and ansatz JSON, the aggregate CSV and the
/// threshold-resource CSV under `<out>/<label>/`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutcome> {
    config.validate()?;
    log::info!(
        "sweep {}: {} instances from seed {}",
        config.label(),
        config.n_instances,
        config.base_seed
    );
    let results: Vec<Result<RunRecord>> = with_jobs(config.jobs, || {
        (0..config.n_instances)
            .into_par_iter()
            .map(|k| {
                let inst = prepare_instance(config, k)?;
                let record = run_instance(config, &inst)?;
                if let Some(out) = &config.out {
                    write_instance_outputs(&out.join(config.label()), &record)?;
                }
                Ok(record)
            })
            .collect()
    })?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                log::error!("instance {k} failed: {e}");
                failures.push(InstanceFailure {
                    instance_id: k,
                    message: e.to_string(),
                });
            }
        }
    }
    let rows: Vec<Vec<RunRow>> = records.iter().map(run_rows).collect();
    let aggregate = aggregate_rows(&rows);
    let outcome = SweepOutcome {
        config: config.clone(),
        records,
        failures,
        aggregate,
    };
    if let Some(dir) = outcome.sweep_dir() {
        write_csv(&dir.join("aggregate.csv"), &outcome.aggregate)?;
        write_csv(
            &dir.join("threshold.csv"),
            &[threshold_row(&outcome, CONVERGENCE_THRESHOLD)],
        )?;
    }
    Ok(outcome)
}

fn write_instance_outputs(dir: &Path, record: &RunRecord) -> Result<()> {
    let id = record.instance_id;
    write_csv(
        &dir.join("runs").join(format!("instance_{id:04}.csv")),
        &run_rows(record),
    )?;
    let layers = record.program.layers(&record.final_layer().params)?;
    super::io::write_atomic(
        &dir.join("ansatz").join(instance_file_name(id)),
        serde_json::to_string_pretty(&layers)?.as_bytes(),
    )
}

/// Reads every `instance_*.csv` under `<dir>/runs` (or `dir` itself).
pub fn read_run_dir(dir: &Path) -> Result<Vec<Vec<RunRow>>> {
    let runs_dir = if dir.join("runs").is_dir() {
        dir.join("runs")
    } else {
        dir.to_path_buf()
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&runs_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|e| e == "csv")
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("instance_"))
        })
        .collect();
    paths.sort();
    paths.iter().map(|p| read_csv(p)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub delta: f64,
    pub layer: usize,
    pub n_instances: usize,
    pub mean_d_norm_error: f64,
    pub median_d_norm_error: f64,
    pub mean_d_ent_middle: f64,
    pub median_d_ent_middle: f64,
    pub mean_d_ent_single_avg: f64,
    pub median_d_ent_single_avg: f64,
}

#[derive(Debug, Clone)]
pub struct DeltaOutcome {
    pub baseline: SweepOutcome,
    pub variants: Vec<(f64, SweepOutcome)>,
    pub differences: Vec<DeltaRow>,
}

impl DeltaOutcome {
    pub fn series(&self, delta: f64) -> Vec<&DeltaRow> {
        self.differences
            .iter()
            .filter(|r| r.delta == delta)
            .collect()
    }
}

/// Per-layer differences `metric(δ) - metric(0)` on paired instances.
pub fn delta_differences(
    baseline: &SweepOutcome,
    delta: f64,
    variant: &SweepOutcome,
) -> Vec<DeltaRow> {
    let mut by_layer: BTreeMap<usize, Vec<[f64; 3]>> = BTreeMap::new();
    for rec in &variant.records {
        let Some(base) = baseline.record(rec.instance_id) else {
            continue;
        };
        for (a, b) in rec.layers.iter().zip(&base.layers).skip(1) {
            by_layer.entry(a.layer).or_default().push([
                a.norm_error - b.norm_error,
                a.ent_middle - b.ent_middle,
                a.ent_single_avg - b.ent_single_avg,
            ]);
        }
    }
    by_layer
        .into_iter()
        .map(|(layer, diffs)| {
            let col = |i: usize| diffs.iter().map(|d| d[i]).collect::<Vec<_>>();
            let (e, m, s) = (col(0), col(1), col(2));
            DeltaRow {
                delta,
                layer,
                n_instances: diffs.len(),
                mean_d_norm_error: mean(&e),
                median_d_norm_error: median(&e),
                mean_d_ent_middle: mean(&m),
                median_d_ent_middle: median(&m),
                mean_d_ent_single_avg: mean(&s),
                median_d_ent_single_avg: median(&s),
            }
        })
        .collect()
}

/// ADAPT sweeps at δ = 0 and at each requested δ over the same instances.
pub fn run_delta_comparison(config: &ExperimentConfig, deltas: &[f64]) -> Result<DeltaOutcome> {
    let base_cfg = ExperimentConfig {
        algo: Algorithm::Adapt,
        delta: 0.0,
        ..config.clone()
    };
    let baseline = run_sweep(&base_cfg)?;
    let mut variants = Vec::new();
    let mut differences = Vec::new();
    for &delta in deltas {
        let outcome = if delta == 0.0 {
            baseline.clone()
        } else {
            run_sweep(&ExperimentConfig {
                delta,
                ..base_cfg.clone()
            })?
        };
        differences.extend(delta_differences(&baseline, delta, &outcome));
        variants.push((delta, outcome));
    }
    if let Some(out) = &config.out {
        write_csv(&out.join("delta_differences.csv"), &differences)?;
    }
    Ok(DeltaOutcome {
        baseline,
        variants,
        differences,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub instance_id: usize,
    pub algo: String,
    pub mode: String,
    pub pool: String,
    pub max_ent_middle: f64,
    pub final_norm_error: f64,
}

/// Per instance: largest middle-cut entropy over the optimized layers
/// against the final normalized error.
pub fn scatter_rows(runs: &[Vec<RunRow>]) -> Vec<ScatterRow> {
    runs.iter()
        .filter_map(|run| {
            let last = run.iter().max_by_key(|r| r.layer)?;
            let max_ent = run
                .iter()
                .filter(|r| r.layer >= 1)
                .map(|r| r.ent_middle)
                .fold(f64::NEG_INFINITY, f64::max);
            Some(ScatterRow {
                instance_id: last.instance_id,
                algo: last.algo.clone(),
                mode: last.mode.clone(),
                pool: last.pool.clone(),
                max_ent_middle: max_ent,
                final_norm_error: last.norm_error,
            })
        })
        .collect()
}

pub fn scatter_max_entropy_vs_final_error(records: &[RunRecord]) -> Vec<ScatterRow> {
    let runs: Vec<Vec<RunRow>> = records.iter().map(run_rows).collect();
    scatter_rows(&runs)
}

/// Spearman correlation between the two scatter columns, per algorithm tag.
pub fn scatter_correlations(rows: &[ScatterRow]) -> BTreeMap<String, f64> {
    let mut by_algo: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in rows {
        let e = by_algo.entry(r.algo.clone()).or_default();
        e.0.push(r.max_ent_middle);
        e.1.push(r.final_norm_error);
    }
    by_algo
        .into_iter()
        .map(|(k, (x, y))| (k, spearman(&x, &y)))
        .collect()
}
