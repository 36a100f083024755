//! CNOT and parameter accounting for layered ansatz circuits.
//!
//! Each ZZ coupling in the cost evolution and each two-qubit Pauli exponential
//! compiles to basis changes around a CNOT–Rz–CNOT ladder: 2 CNOTs apiece.
//! Single-qubit rotations (including the factorized global mixers and the
//! `Z_0` field) are free in this metric.

use serde::Serialize;

use crate::adapt::RunRecord;
use crate::problem::CostHamiltonian;
use crate::sim::MixerOperator;

/// Normalized energy error at which a run counts as converged.
pub const CONVERGENCE_THRESHOLD: f64 = 0.05;

pub fn cnot_cost_of_layer(h: &CostHamiltonian, mixer: &MixerOperator) -> usize {
    let mixer_cost = match mixer {
        MixerOperator::String(s) if s.weight() >= 2 => 2 * (s.weight() - 1),
        _ => 0,
    };
    2 * h.coupling_count() + mixer_cost
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceCount {
    pub cnot_total: usize,
    pub n_parameters: usize,
    pub layers_used: usize,
    pub reached_threshold: bool,
}

/// Cumulative resources at the first layer whose normalized error is at or
/// below `threshold`, or at the final layer if none is.
pub fn resources_to_threshold(record: &RunRecord, threshold: f64) -> ResourceCount {
    let hit = record
        .layers
        .iter()
        .skip(1)
        .find(|l| l.norm_error <= threshold);
    let (row, reached) = match hit {
        Some(row) => (row, true),
        None => (record.final_layer(), false),
    };
    ResourceCount {
        cnot_total: row.cnot_cumulative,
        n_parameters: 2 * row.layer,
        layers_used: row.layer,
        reached_threshold: reached,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSummary {
    pub mean_cnot: f64,
    pub std_cnot: f64,
    pub mean_params: f64,
    pub std_params: f64,
    pub n_included: usize,
    pub n_excluded: usize,
}

/// Mean and sample standard deviation over runs that reached the threshold;
/// the rest are only counted.
pub fn summarize_threshold(counts: &[ResourceCount]) -> ThresholdSummary {
    let reached: Vec<&ResourceCount> = counts.iter().filter(|c| c.reached_threshold).collect();
    let stats = |xs: Vec<f64>| -> (f64, f64) {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return (f64::NAN, f64::NAN);
        }
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        (mean, var.sqrt())
    };
    let (mean_cnot, std_cnot) = stats(reached.iter().map(|c| c.cnot_total as f64).collect());
    let (mean_params, std_params) = stats(reached.iter().map(|c| c.n_parameters as f64).collect());
    ThresholdSummary {
        mean_cnot,
        std_cnot,
        mean_params,
        std_params,
        n_included: reached.len(),
        n_excluded: counts.len() - reached.len(),
    }
}
