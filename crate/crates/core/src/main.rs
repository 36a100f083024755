use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use qaoa_entangle::adapt::{Algorithm, Connectivity, Mode};
use qaoa_entangle::entanglement::{haar_baseline, Bipartition, LogBase};
use qaoa_entangle::harness::config::PAPER_INSTANCES;
use qaoa_entangle::harness::io::{read_csv, write_csv, RunRow};
use qaoa_entangle::harness::spectrum::{haar_rows, DEFAULT_HAAR_SAMPLES};
use qaoa_entangle::harness::{
    read_run_dir, run_delta_comparison, run_spectrum_study, run_sweep, scatter_correlations,
    scatter_rows, ExperimentConfig,
};

#[derive(Parser)]
#[command(
    name = "qaoa-lab",
    version,
    about = "QAOA / ADAPT-QAOA Max-Cut entanglement lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize every instance layer by layer and aggregate per layer.
    Sweep(Common),
    /// ADAPT sweeps at several δ values, differenced against δ = 0.
    Delta {
        #[command(flatten)]
        common: Common,
        /// Penalties to compare against δ = 0.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-0.5,-0.1,0.1,0.5"
        )]
        deltas: Vec<f64>,
    },
    /// Random-parameter entanglement spectra of ADAPT and QAOA ansatze.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Parameter draws per graph and layer.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_HAAR_SAMPLES)]
        haar_samples: usize,
    },
    /// Max middle-cut entropy against final error, from existing run directories.
    Scatter {
        /// Sweep directories (containing runs/) to read.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Haar-random middle-cut entropy and spectrum.
    Baseline {
        #[arg(long, default_value_t = 6)]
        qubits: usize,
        #[arg(long, default_value_t = DEFAULT_HAAR_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 6)]
    qubits: usize,
    /// Regular degree; defaults to the complete graph.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    /// Run the full 512-instance set.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "adapt")]
    algo: Algorithm,
    #[arg(long, default_value = "preserve")]
    mode: Mode,
    #[arg(long, default_value = "full")]
    pool: Connectivity,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, default_value_t = 0.05)]
    f: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    gamma0: f64,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory of instance JSON files to use instead of generating.
    #[arg(long)]
    instances_from: Option<PathBuf>,
    /// JSON config; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn to_config(&self) -> anyhow::Result<ExperimentConfig> {
        let base = ExperimentConfig {
            n_qubits: self.qubits,
            degree: self.degree,
            n_instances: if self.full {
                PAPER_INSTANCES
            } else {
                self.instances
            },
            base_seed: self.seed,
            algo: self.algo,
            mode: self.mode,
            pool: self.pool,
            delta: self.delta,
            f: self.f,
            gamma0: self.gamma0,
            p_max: self.layers,
            out: self.out.clone(),
            instances_dir: self.instances_from.clone(),
            jobs: self.jobs,
            ..Default::default()
        };
        let cfg = match &self.config {
            Some(p) => base
                .overlay_json(p)
                .with_context(|| format!("reading config {}", p.display()))?,
            None => base,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report_failures(label: &str, failed: usize, total: usize) -> bool {
    if failed > 0 {
        eprintln!("{label}: {failed} of {total} instances failed");
    }
    failed > 0
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Sweep(common) => {
            let cfg = common.to_config()?;
            let outcome = run_sweep(&cfg)?;
            if let Some(last) = outcome.aggregate.last() {
                println!(
                    "{}: layer {} mean error {:.6} median error {:.6} ({} instances)",
                    cfg.label(),
                    last.layer,
                    last.mean_norm_error,
                    last.median_norm_error,
                    last.n_instances
                );
            }
            Ok(report_failures(
                &cfg.label(),
                outcome.failures.len(),
                cfg.n_instances,
            ))
        }
        Command::Delta { common, deltas } => {
            let cfg = common.to_config()?;
            let outcome = run_delta_comparison(&cfg, &deltas)?;
            for (delta, _) in &outcome.variants {
                if let Some(last) = outcome.series(*delta).last() {
                    println!(
                        "delta {delta}: layer {} mean error difference {:+.6}",
                        last.layer, last.mean_d_norm_error
                    );
                }
            }
            let mut partial = report_failures(
                "delta baseline",
                outcome.baseline.failures.len(),
                cfg.n_instances,
            );
            for (delta, v) in &outcome.variants {
                partial |=
                    report_failures(&format!("delta {delta}"), v.failures.len(), cfg.n_instances);
            }
            Ok(partial)
        }
        Command::Spectrum {
            common,
            samples,
            haar_samples,
        } => {
            let cfg = common.to_config()?;
            let study = run_spectrum_study(&cfg, samples, cfg.n_instances, haar_samples)?;
            for (a, q) in study.adapt.iter().zip(&study.qaoa) {
                println!(
                    "layer {:2}: adapt S_mid {:.4}  qaoa S_mid {:.4}",
                    a.layer, a.mean_entropy_middle, q.mean_entropy_middle
                );
            }
            println!("haar S_mid {:.4}", study.haar.mean_entropy_middle);
            Ok(false)
        }
        Command::Scatter { runs, out } => {
            let mut all = Vec::new();
            for dir in &runs {
                let rows: Vec<Vec<RunRow>> = read_run_dir(dir)
                    .with_context(|| format!("reading runs under {}", dir.display()))?;
                all.extend(rows);
            }
            if all.is_empty() {
                bail!("no instance CSVs found");
            }
            let rows = scatter_rows(&all);
            write_csv(&out, &rows)?;
            for (algo, rho) in scatter_correlations(&rows) {
                println!("{algo}: Spearman rank correlation {rho:.4}");
            }
            // Confirm the emitted file parses back.
            let _: Vec<qaoa_entangle::harness::ScatterRow> = read_csv(&out)?;
            Ok(false)
        }
        Command::Baseline {
            qubits,
            samples,
            seed,
            out,
        } => {
            let stats = haar_baseline(
                qubits,
                &Bipartition::middle(qubits)?,
                samples,
                seed,
                LogBase::Two,
            )?;
            println!(
                "haar {qubits} qubits: middle-cut entropy {:.5} ± {:.5} bits over {samples} states",
                stats.mean_entropy_middle, stats.std_entropy_middle
            );
            if let Some(out) = out {
                write_csv(&out, &haar_rows(&stats))?;
            }
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
