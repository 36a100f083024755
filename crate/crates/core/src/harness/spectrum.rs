//! Random-parameter entanglement spectra of optimized ansatz structures,
//! compared against Haar-random states.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::io::write_csv;
use super::stats::{mean, std_dev};
use super::sweep::{prepare_instance, run_sweep};
use crate::adapt::{Algorithm, RunRecord};
use crate::ansatz::AnsatzProgram;
use crate::entanglement::{haar_baseline, spectrum_sample, Bipartition, LogBase, SpectrumStats};
use crate::error::{Error, Result};
use crate::seeding::derive;

pub const DEFAULT_HAAR_SAMPLES: usize = 10_000;

/// Across-graph statistics for one ansatz depth.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpectrum {
    pub layer: usize,
    /// Per level index: mean over graphs of each graph's sample-mean level.
    pub mean_levels: Vec<f64>,
    pub std_levels: Vec<f64>,
    pub mean_entropy_middle: f64,
    pub std_entropy_middle: f64,
    pub mean_entropy_single: f64,
    pub std_entropy_single: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumStudy {
    pub adapt: Vec<LayerSpectrum>,
    pub qaoa: Vec<LayerSpectrum>,
    pub haar: SpectrumStats,
}

impl SpectrumStudy {
    pub fn layer(&self, algo: Algorithm, layer: usize) -> Option<&LayerSpectrum> {
        let series = match algo {
            Algorithm::Adapt => &self.adapt,
            Algorithm::Qaoa => &self.qaoa,
        };
        series.iter().find(|l| l.layer == layer)
    }
}

fn combine(layer: usize, per_graph: &[SpectrumStats]) -> LayerSpectrum {
    let width = per_graph
        .iter()
        .map(|s| s.mean_levels.len())
        .max()
        .unwrap_or(0);
    let mut mean_levels = Vec::with_capacity(width);
    let mut std_levels = Vec::with_capacity(width);
    for k in 0..width {
        let vals: Vec<f64> = per_graph
            .iter()
            .filter_map(|s| s.mean_levels.get(k).copied().filter(|x| x.is_finite()))
            .collect();
        mean_levels.push(mean(&vals));
        std_levels.push(std_dev(&vals));
    }
    let middle: Vec<f64> = per_graph.iter().map(|s| s.mean_entropy_middle).collect();
    let single: Vec<f64> = per_graph.iter().map(|s| s.mean_entropy_single).collect();
    LayerSpectrum {
        layer,
        mean_levels,
        std_levels,
        mean_entropy_middle: mean(&middle),
        std_entropy_middle: std_dev(&middle),
        mean_entropy_single: mean(&single),
        std_entropy_single: std_dev(&single),
    }
}

/// Spectra at every depth `0..=p_max` for the operator sequences of the given
/// optimized ADAPT runs (parameters replaced by random draws; the sequence is
/// not re-selected) and for standard QAOA on the same graphs.
pub fn spectrum_study_from_records(
    config: &ExperimentConfig,
    adapt_records: &[RunRecord],
    n_param_samples: usize,
    haar_samples: usize,
) -> Result<SpectrumStudy> {
    if adapt_records.is_empty() {
        return Err(Error::Configuration(
            "spectrum study needs at least one ADAPT run".into(),
        ));
    }
    let n = config.n_qubits;
    let p_max = config.layers();
    let mut adapt_per_layer: Vec<Vec<SpectrumStats>> = vec![Vec::new(); p_max + 1];
    let mut qaoa_per_layer: Vec<Vec<SpectrumStats>> = vec![Vec::new(); p_max + 1];
    for rec in adapt_records {
        if rec.algo != Algorithm::Adapt {
            return Err(Error::Configuration(
                "spectrum study expects ADAPT run records".into(),
            ));
        }
        let inst = prepare_instance(config, rec.instance_id)?;
        for layer in 0..=p_max.min(rec.program.depth()) {
            let adapt_prog = rec.program.truncated(layer);
            let qaoa_prog = AnsatzProgram::standard(crate::ansatz::Reference::AllPlus, layer);
            let tag = (layer as u64) << 1;
            adapt_per_layer[layer].push(spectrum_sample(
                &adapt_prog,
                &inst.hamiltonian,
                n,
                n_param_samples,
                derive(inst.seed, tag),
                LogBase::Two,
            )?);
            qaoa_per_layer[layer].push(spectrum_sample(
                &qaoa_prog,
                &inst.hamiltonian,
                n,
                n_param_samples,
                derive(inst.seed, tag | 1),
                LogBase::Two,
            )?);
        }
    }
    let collect = |per: Vec<Vec<SpectrumStats>>| -> Vec<LayerSpectrum> {
        per.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(l, v)| combine(l, v))
            .collect()
    };
    let haar = haar_baseline(
        n,
        &Bipartition::middle(n)?,
        haar_samples,
        config.base_seed,
        LogBase::Two,
    )?;
    let study = SpectrumStudy {
        adapt: collect(adapt_per_layer),
        qaoa: collect(qaoa_per_layer),
        haar,
    };
    if let Some(out) = &config.out {
        write_spectrum_outputs(&out.join("spectrum"), &study)?;
    }
    Ok(study)
}

/// Runs the ADAPT sweep over `n_graphs` instances, then the spectrum study.
pub fn run_spectrum_study(
    config: &ExperimentConfig,
    n_param_samples: usize,
    n_graphs: usize,
    haar_samples: usize,
) -> Result<SpectrumStudy> {
    let cfg = ExperimentConfig {
        algo: Algorithm::Adapt,
        n_instances: n_graphs,
        ..config.clone()
    };
    let sweep = run_sweep(&cfg)?;
    spectrum_study_from_records(&cfg, &sweep.records, n_param_samples, haar_samples)
}

/// A spectrum CSV line; `level_index` is an integer, or `S_middle` /
/// `S_single` for the entropy summary rows of each layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub layer: String,
    pub level_index: String,
    pub mean_xi: f64,
    pub std_xi: f64,
}

pub fn spectrum_rows(series: &[LayerSpectrum]) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    for l in series {
        for (k, (m, s)) in l.mean_levels.iter().zip(&l.std_levels).enumerate() {
            rows.push(SpectrumRow {
                layer: l.layer.to_string(),
                level_index: k.to_string(),
                mean_xi: *m,
                std_xi: *s,
            });
        }
        rows.push(SpectrumRow {
            layer: l.layer.to_string(),
            level_index: "S_middle".into(),
            mean_xi: l.mean_entropy_middle,
            std_xi: l.std_entropy_middle,
        });
        rows.push(SpectrumRow {
            layer: l.layer.to_string(),
            level_index: "S_single".into(),
            mean_xi: l.mean_entropy_single,
            std_xi: l.std_entropy_single,
        });
    }
    rows
}

pub fn haar_rows(haar: &SpectrumStats) -> Vec<SpectrumRow> {
    let mut rows: Vec<SpectrumRow> = haar
        .mean_levels
        .iter()
        .zip(&haar.std_levels)
        .enumerate()
        .map(|(k, (m, s))| SpectrumRow {
            layer: "haar".into(),
            level_index: k.to_string(),
            mean_xi: *m,
            std_xi: *s,
        })
        .collect();
    rows.push(SpectrumRow {
        layer: "haar".into(),
        level_index: "S_middle".into(),
        mean_xi: haar.mean_entropy_middle,
        std_xi: haar.std_entropy_middle,
    });
    rows.push(SpectrumRow {
        layer: "haar".into(),
        level_index: "S_single".into(),
        mean_xi: haar.mean_entropy_single,
        std_xi: f64::NAN,
    });
    rows
}

fn write_spectrum_outputs(dir: &std::path::Path, study: &SpectrumStudy) -> Result<()> {
    write_csv(
        &dir.join("spectrum_adapt.csv"),
        &spectrum_rows(&study.adapt),
    )?;
    write_csv(&dir.join("spectrum_qaoa.csv"), &spectrum_rows(&study.qaoa))?;
    write_csv(&dir.join("spectrum_haar.csv"), &haar_rows(&study.haar))
}
