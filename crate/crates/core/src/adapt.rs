//! ADAPT-QAOA growth loop and the standard-QAOA baseline that shares it.
//!
//! Each layer: evolve the previous optimum by `e^{-iγ0 H}`, score every pool
//! element by `|i<[A, H]>|` (two-qubit elements scaled by `1 - δ`), append the
//! winner, warm-start, and re-optimize all parameters with Nelder-Mead.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ansatz::{warm_start_params, AnsatzProgram, Reference, DEFAULT_GAMMA0};
use crate::entanglement::{
    average_single_qubit_entropy, entropy, symmetry_preserving_entropy,
    symmetry_preserving_single_average, Bipartition, LogBase,
};
use crate::error::{Error, Result};
use crate::optimizer::{minimize, OptimizerConfig};
use crate::problem::{normalized_error, CostHamiltonian, GroundTruth};
use crate::resources::cnot_cost_of_layer;
use crate::sim::{commutator_from_images, MixerOperator, Pauli, QuantumState};

/// Gradient magnitudes at or below this count as zero when flagging a
/// degenerate selection.
pub const DEGENERATE_GRADIENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Full,
    Ladder,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Adapt,
    Qaoa,
}

/// Whether the cost Hamiltonian keeps the global flip symmetry (entropies are
/// then taken after measuring qubit 0) or is perturbed by `f Z_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Preserve,
    Break,
}

macro_rules! label_enum {
    ($ty:ty, $($variant:path => $label:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $label),+ })
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($label => Ok($variant),)+
                    _ => Err(Error::Parse(format!("unknown {} {s:?}", stringify!($ty)))),
                }
            }
        }
    };
}

label_enum!(Connectivity, Connectivity::Full => "full", Connectivity::Ladder => "ladder", Connectivity::Linear => "linear");
label_enum!(Algorithm, Algorithm::Adapt => "adapt", Algorithm::Qaoa => "qaoa");
label_enum!(Mode, Mode::Preserve => "preserve", Mode::Break => "break");

impl Mode {
    /// Field strength to build the cost Hamiltonian with.
    pub fn field(self, f: f64) -> f64 {
        match self {
            Mode::Preserve => 0.0,
            Mode::Break => f,
        }
    }
}

impl Connectivity {
    /// Unordered qubit pairs allowed to host two-qubit pool elements.
    ///
    /// The ladder places qubit `q` at row `q mod 2`, column `q div 2` of a
    /// `2 × n/2` grid.
    pub fn edges(self, n: usize) -> Result<Vec<(usize, usize)>> {
        let mut edges = match self {
            Connectivity::Full => (0..n)
                .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                .collect(),
            Connectivity::Linear => (0..n.saturating_sub(1)).map(|q| (q, q + 1)).collect(),
            Connectivity::Ladder => {
                if !n.is_multiple_of(2) {
                    return Err(Error::Configuration(format!(
                        "ladder connectivity needs an even qubit count, got {n}"
                    )));
                }
                let mut e = Vec::new();
                for q in 0..n {
                    if q % 2 == 0 {
                        e.push((q, q + 1));
                    }
                    if q + 2 < n {
                        e.push((q, q + 2));
                    }
                }
                e
            }
        };
        edges.sort_unstable();
        Ok(edges)
    }
}

const PAIR_TYPES: [(Pauli, Pauli); 5] = [
    (Pauli::X, Pauli::X),
    (Pauli::Y, Pauli::Y),
    (Pauli::X, Pauli::Y),
    (Pauli::X, Pauli::Z),
    (Pauli::Y, Pauli::Z),
];

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPool {
    connectivity: Connectivity,
    n_qubits: usize,
    elements: Vec<MixerOperator>,
}

impl OperatorPool {
    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn elements(&self) -> &[MixerOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Canonical order: `M`, `N`, then `X_q, Y_q` for each qubit, then two-qubit
/// strings by type (XX, YY, XY, XZ, YZ) and ordered pair `(j, k)`. Every
/// ordered pair is kept, so symmetric types appear in both orientations.
pub fn build_pool(n: usize, connectivity: Connectivity) -> Result<OperatorPool> {
    if n < 2 {
        return Err(Error::Configuration(format!(
            "operator pool needs n >= 2, got {n}"
        )));
    }
    let edges = connectivity.edges(n)?;
    let mut elements = vec![MixerOperator::SumX, MixerOperator::SumY];
    for q in 0..n {
        elements.push(MixerOperator::single(q, Pauli::X));
        elements.push(MixerOperator::single(q, Pauli::Y));
    }
    let mut ordered: Vec<(usize, usize)> =
        edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    ordered.sort_unstable();
    for (pj, pk) in PAIR_TYPES {
        for &(j, k) in &ordered {
            elements.push(MixerOperator::pair(j, pj, k, pk)?);
        }
    }
    Ok(OperatorPool {
        connectivity,
        n_qubits: n,
        elements,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    /// Raw gradients `i<[A, H]>` in pool order.
    pub gradients: Vec<(MixerOperator, f64)>,
    /// Gradients after scaling two-qubit elements by `1 - δ`.
    pub scaled_gradients: Vec<f64>,
    pub chosen: MixerOperator,
    pub chosen_index: usize,
    pub delta: f64,
    /// Every scaled gradient vanished; `chosen` is the first pool element.
    pub degenerate: bool,
}

impl SelectionReport {
    /// Largest `|gradient|` among elements that anticommute with `X^{⊗n}`.
    pub fn max_anticommuting_gradient(&self) -> f64 {
        self.gradients
            .iter()
            .filter(|(a, _)| a.anticommutes_with_flip())
            .map(|(_, g)| g.abs())
            .fold(0.0, f64::max)
    }
}

/// Picks the pool element with the largest scaled gradient magnitude at
/// `e^{-iγ0 H}|state_prev>`. Ties go to the earlier element.
pub fn select_mixer(
    state_prev: &QuantumState,
    h: &CostHamiltonian,
    pool: &OperatorPool,
    gamma0: f64,
    delta: f64,
) -> Result<SelectionReport> {
    if pool.is_empty() {
        return Err(Error::Configuration("empty operator pool".into()));
    }
    if delta.is_nan() || delta.abs() >= 1.0 {
        return Err(Error::Configuration(format!(
            "penalty delta must satisfy |δ| < 1, got {delta}"
        )));
    }
    let mut psi = state_prev.clone();
    psi.apply_diagonal_phases(h.diagonal(), gamma0);
    let h_psi: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(h.diagonal())
        .map(|(a, e)| a * e)
        .collect();
    let mut a_psi = vec![Complex64::new(0.0, 0.0); psi.dim()];
    let mut gradients = Vec::with_capacity(pool.len());
    let mut scaled_gradients = Vec::with_capacity(pool.len());
    let (mut best, mut best_mag) = (0usize, f64::NEG_INFINITY);
    for (idx, a) in pool.elements().iter().enumerate() {
        a.apply_into(psi.amplitudes(), &mut a_psi);
        let g = commutator_from_images(&a_psi, &h_psi)?;
        let scaled = if a.is_two_qubit() {
            g * (1.0 - delta)
        } else {
            g
        };
        if scaled.abs() > best_mag {
            best = idx;
            best_mag = scaled.abs();
        }
        gradients.push((a.clone(), g));
        scaled_gradients.push(scaled);
    }
    let degenerate = best_mag <= DEGENERATE_GRADIENT;
    if degenerate {
        best = 0;
        log::debug!("degenerate selection: all gradients below {DEGENERATE_GRADIENT:e}");
    }
    Ok(SelectionReport {
        chosen: pool.elements()[best].clone(),
        chosen_index: best,
        gradients,
        scaled_gradients,
        delta,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunSettings {
    pub mode: Mode,
    pub p_max: usize,
    pub delta: f64,
    pub gamma0: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            mode: Mode::Preserve,
            p_max: 15,
            delta: 0.0,
            gamma0: DEFAULT_GAMMA0,
            optimizer: OptimizerConfig::default(),
        }
    }
}

/// Everything recorded about the optimized state after one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerRecord {
    pub layer: usize,
    pub energy: f64,
    pub norm_error: f64,
    pub ent_middle: f64,
    pub ent_single_avg: f64,
    /// `None` for the reference-state row.
    pub mixer: Option<MixerOperator>,
    pub cnot_cumulative: usize,
    pub n_params: usize,
    pub optimizer_evals: usize,
    pub converged: bool,
    pub degenerate_selection: bool,
    /// Largest F-odd gradient seen when this layer's mixer was chosen.
    pub max_anticommuting_gradient: Option<f64>,
    pub diagnostic: Option<String>,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance_id: usize,
    pub algo: Algorithm,
    pub mode: Mode,
    /// `None` for standard QAOA.
    pub pool: Option<Connectivity>,
    pub delta: f64,
    pub truth: GroundTruth,
    pub program: AnsatzProgram,
    /// Row 0 is the reference state, row `l` the optimum with `l` layers.
    pub layers: Vec<LayerRecord>,
}

impl RunRecord {
    pub fn final_layer(&self) -> &LayerRecord {
        self.layers
            .last()
            .expect("run record always has the reference row")
    }

    pub fn pool_label(&self) -> String {
        self.pool
            .map_or_else(|| "none".to_string(), |c| c.to_string())
    }
}

/// Entanglement measures reported for an optimized state.
///
/// In symmetry-preserving mode qubit 0 is measured first; with two qubits
/// that always leaves a product state.
pub fn state_entropies(state: &QuantumState, mode: Mode) -> Result<(f64, f64)> {
    let n = state.n_qubits();
    if n < 2 {
        return Ok((0.0, 0.0));
    }
    let cut = Bipartition::middle(n)?;
    match mode {
        Mode::Break => Ok((
            entropy(state, &cut, LogBase::Two)?,
            average_single_qubit_entropy(state, LogBase::Two)?,
        )),
        Mode::Preserve if n == 2 => Ok((0.0, 0.0)),
        Mode::Preserve => Ok((
            symmetry_preserving_entropy(state, &cut, LogBase::Two)?,
            symmetry_preserving_single_average(state, LogBase::Two)?,
        )),
    }
}

struct Choice {
    mixer: MixerOperator,
    degenerate: bool,
    max_anticommuting: Option<f64>,
}

fn run_layers(
    h: &CostHamiltonian,
    truth: &GroundTruth,
    reference: Reference,
    settings: &RunSettings,
    mut choose: impl FnMut(&QuantumState) -> Result<Choice>,
) -> Result<(AnsatzProgram, Vec<LayerRecord>)> {
    settings.optimizer.validate()?;
    let n = h.n_qubits();
    let mut program = AnsatzProgram::new(reference);
    let mut params: Vec<f64> = Vec::new();
    let mut state = program.evaluate(&params, h, n)?;
    let energy = state.diagonal_expectation(h.diagonal());
    let (ent_middle, ent_single_avg) = state_entropies(&state, settings.mode)?;
    let mut rows = vec![LayerRecord {
        layer: 0,
        energy,
        norm_error: normalized_error(energy, truth)?,
        ent_middle,
        ent_single_avg,
        mixer: None,
        cnot_cumulative: 0,
        n_params: 0,
        optimizer_evals: 0,
        converged: true,
        degenerate_selection: false,
        max_anticommuting_gradient: None,
        diagnostic: None,
        params: vec![],
    }];
    let mut cnots = 0;

    for layer in 1..=settings.p_max {
        let choice = choose(&state)?;
        cnots += cnot_cost_of_layer(h, &choice.mixer);
        program.push(choice.mixer.clone());
        let x0 = warm_start_params(&params, settings.gamma0);
        let objective = |x: &[f64]| program.energy_of(x, h, n).unwrap_or(f64::NAN);
        let (evals, converged, diagnostic) = match minimize(objective, &x0, &settings.optimizer) {
            Ok(r) => {
                params = r.best_params;
                (r.evaluations, r.converged, None)
            }
            Err(e) => {
                log::warn!("layer {layer}: optimizer failed ({e}); keeping warm start");
                params = x0;
                (0, false, Some(e.to_string()))
            }
        };
        state = program.evaluate(&params, h, n)?;
        let energy = state.diagonal_expectation(h.diagonal());
        let (ent_middle, ent_single_avg) = state_entropies(&state, settings.mode)?;
        rows.push(LayerRecord {
            layer,
            energy,
            norm_error: normalized_error(energy, truth)?,
            ent_middle,
            ent_single_avg,
            mixer: Some(choice.mixer),
            cnot_cumulative: cnots,
            n_params: params.len(),
            optimizer_evals: evals,
            converged,
            degenerate_selection: choice.degenerate,
            max_anticommuting_gradient: choice.max_anticommuting,
            diagnostic,
            params: params.clone(),
        });
    }
    Ok((program, rows))
}

/// ADAPT-QAOA: grows the ansatz one gradient-selected mixer at a time.
pub fn grow_and_optimize(
    h: &CostHamiltonian,
    truth: &GroundTruth,
    pool: &OperatorPool,
    settings: &RunSettings,
) -> Result<RunRecord> {
    if pool.n_qubits() != h.n_qubits() {
        return Err(Error::Configuration(format!(
            "pool built for {} qubits, Hamiltonian has {}",
            pool.n_qubits(),
            h.n_qubits()
        )));
    }
    let reference = match settings.mode {
        Mode::Preserve => Reference::AllPlus,
        Mode::Break => Reference::SymmetryBroken,
    };
    let (program, layers) = run_layers(h, truth, reference, settings, |state| {
        let report = select_mixer(state, h, pool, settings.gamma0, settings.delta)?;
        Ok(Choice {
            max_anticommuting: Some(report.max_anticommuting_gradient()),
            degenerate: report.degenerate,
            mixer: report.chosen,
        })
    })?;
    Ok(RunRecord {
        instance_id: 0,
        algo: Algorithm::Adapt,
        mode: settings.mode,
        pool: Some(pool.connectivity()),
        delta: settings.delta,
        truth: truth.clone(),
        program,
        layers,
    })
}

/// Standard QAOA with the global X mixer, warm-started layer by layer.
pub fn run_standard_qaoa(
    h: &CostHamiltonian,
    truth: &GroundTruth,
    settings: &RunSettings,
) -> Result<RunRecord> {
    let (program, layers) = run_layers(h, truth, Reference::AllPlus, settings, |_| {
        Ok(Choice {
            mixer: MixerOperator::SumX,
            degenerate: false,
            max_anticommuting: None,
        })
    })?;
    Ok(RunRecord {
        instance_id: 0,
        algo: Algorithm::Qaoa,
        mode: settings.mode,
        pool: None,
        delta: 0.0,
        truth: truth.clone(),
        program,
        layers,
    })
}
