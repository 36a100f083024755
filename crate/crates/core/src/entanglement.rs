//! Bipartite entanglement diagnostics.
//!
//! Entropies come from the Schmidt coefficients of the amplitude vector
//! reshaped into a `dim_A × dim_B` matrix; the reduced density matrix is
//! never formed. Eigenvalues of `ρ_A` at or below [`EIGENVALUE_CUTOFF`] are
//! dropped before taking logarithms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::ansatz::AnsatzProgram;
use crate::error::{Error, Result};
use crate::problem::CostHamiltonian;
use crate::seeding::{substream, Stream};
use crate::sim::QuantumState;

pub const EIGENVALUE_CUTOFF: f64 = 1e-12;
/// Smallest outcome probability a projection accepts.
pub const PROJECTION_CUTOFF: f64 = 1e-12;
/// Upper end of the uniform range random ansatz parameters are drawn from.
pub const RANDOM_PARAMETER_RANGE: f64 = 20.0 * std::f64::consts::PI;
/// Mean middle-cut entropy (bits) of Haar-random 6-qubit states, from an
/// independent Monte-Carlo run of 2 × 10⁵ samples.
pub const HAAR_MIDDLE_ENTROPY_6Q_BITS: f64 = 2.2917;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    subsystem_a: Vec<usize>,
    subsystem_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, mut subsystem_a: Vec<usize>) -> Result<Self> {
        subsystem_a.sort_unstable();
        subsystem_a.dedup();
        if subsystem_a.is_empty() || subsystem_a.len() >= n || subsystem_a.iter().any(|&q| q >= n) {
            return Err(Error::ContractViolation(format!(
                "invalid bipartition {subsystem_a:?} of {n} qubits"
            )));
        }
        let subsystem_b = (0..n).filter(|q| !subsystem_a.contains(q)).collect();
        Ok(Self {
            subsystem_a,
            subsystem_b,
        })
    }

    /// Qubits `0..n/2` against the rest.
    pub fn middle(n: usize) -> Result<Self> {
        Self::new(n, (0..n / 2).collect())
    }

    pub fn single(n: usize, q: usize) -> Result<Self> {
        Self::new(n, vec![q])
    }

    pub fn subsystem_a(&self) -> &[usize] {
        &self.subsystem_a
    }

    pub fn subsystem_b(&self) -> &[usize] {
        &self.subsystem_b
    }

    pub fn swapped(&self) -> Self {
        Self {
            subsystem_a: self.subsystem_b.clone(),
            subsystem_b: self.subsystem_a.clone(),
        }
    }

    fn n_qubits(&self) -> usize {
        self.subsystem_a.len() + self.subsystem_b.len()
    }

    pub fn schmidt_rank_bound(&self) -> usize {
        1 << self.subsystem_a.len().min(self.subsystem_b.len())
    }

    fn check(&self, state: &QuantumState) -> Result<()> {
        if self.n_qubits() != state.n_qubits() {
            return Err(Error::ContractViolation(format!(
                "bipartition of {} qubits applied to a {}-qubit state",
                self.n_qubits(),
                state.n_qubits()
            )));
        }
        Ok(())
    }
}

fn gather_bits(b: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((b >> q) & 1) << k))
}

/// Amplitudes reshaped into a `dim_A × dim_B` matrix.
pub fn amplitude_matrix(state: &QuantumState, cut: &Bipartition) -> Result<DMatrix<Complex64>> {
    cut.check(state)?;
    let rows = 1 << cut.subsystem_a.len();
    let cols = 1 << cut.subsystem_b.len();
    let mut m = DMatrix::zeros(rows, cols);
    for (b, &amp) in state.amplitudes().iter().enumerate() {
        m[(
            gather_bits(b, &cut.subsystem_a),
            gather_bits(b, &cut.subsystem_b),
        )] = amp;
    }
    Ok(m)
}

/// Singular values of the reshaped amplitude matrix, largest first.
pub fn schmidt_coefficients(state: &QuantumState, cut: &Bipartition) -> Result<Vec<f64>> {
    let m = amplitude_matrix(state, cut)?;
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn entropy_of_weights(weights: impl IntoIterator<Item = f64>, base: LogBase) -> f64 {
    let s: f64 = weights
        .into_iter()
        .filter(|&l| l > EIGENVALUE_CUTOFF)
        .map(|l| -l * base.log(l))
        .sum();
    // Round-off on a pure weight of 1 - ε gives a value like -1e-16.
    s.max(0.0)
}

/// Von Neumann entropy of the reduced state on `cut.subsystem_a`.
pub fn entropy(state: &QuantumState, cut: &Bipartition, base: LogBase) -> Result<f64> {
    let s = schmidt_coefficients(state, cut)?;
    Ok(entropy_of_weights(s.into_iter().map(|x| x * x), base))
}

/// Mean over qubits of the entropy between that qubit and the rest.
pub fn average_single_qubit_entropy(state: &QuantumState, base: LogBase) -> Result<f64> {
    let n = state.n_qubits();
    if n < 2 {
        return Err(Error::Size(
            "single-qubit entropy needs at least 2 qubits".into(),
        ));
    }
    single_qubit_mean(state, 0..n, base)
}

fn single_qubit_mean(
    state: &QuantumState,
    qubits: impl ExactSizeIterator<Item = usize>,
    base: LogBase,
) -> Result<f64> {
    let n = state.n_qubits();
    let count = qubits.len();
    let mut total = 0.0;
    for q in qubits {
        total += entropy(state, &Bipartition::single(n, q)?, base)?;
    }
    Ok(total / count as f64)
}

/// Projects `qubit` onto `outcome`, returning the renormalized state and the
/// outcome probability.
pub fn project_qubit(
    state: &QuantumState,
    qubit: usize,
    outcome: u8,
) -> Result<(QuantumState, f64)> {
    let n = state.n_qubits();
    if qubit >= n || outcome > 1 {
        return Err(Error::ContractViolation(format!(
            "cannot project qubit {qubit} of {n} onto {outcome}"
        )));
    }
    let keep = usize::from(outcome);
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, &a)| {
            if (b >> qubit) & 1 == keep {
                a
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if probability <= PROJECTION_CUTOFF {
        return Err(Error::Projection {
            qubit,
            outcome,
            probability,
        });
    }
    Ok((QuantumState::from_amplitudes(n, amps)?, probability))
}

/// Both outcomes of measuring qubit 0, with their probabilities; outcomes
/// below the projection cutoff are skipped.
fn qubit0_branches(state: &QuantumState) -> Result<Vec<(QuantumState, f64)>> {
    if state.n_qubits() < 3 {
        return Err(Error::Size(
            "symmetry-preserving entropy needs at least 3 qubits".into(),
        ));
    }
    let mut out = Vec::with_capacity(2);
    for outcome in [0, 1] {
        match project_qubit(state, 0, outcome) {
            Ok(branch) => out.push(branch),
            Err(Error::Projection { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Entropy across `cut` after measuring qubit 0, averaged over both outcomes
/// with their Born weights.
///
/// Qubit 0 is in a basis state after projection, so the cut behaves as the
/// induced cut on the remaining qubits whether or not it contains qubit 0.
pub fn symmetry_preserving_entropy(
    state: &QuantumState,
    cut: &Bipartition,
    base: LogBase,
) -> Result<f64> {
    let mut total = 0.0;
    for (branch, p) in qubit0_branches(state)? {
        total += p * entropy(&branch, cut, base)?;
    }
    Ok(total)
}

/// Single-qubit-cut average after measuring qubit 0, over qubits `1..n`.
pub fn symmetry_preserving_single_average(state: &QuantumState, base: LogBase) -> Result<f64> {
    let n = state.n_qubits();
    let mut total = 0.0;
    for (branch, p) in qubit0_branches(state)? {
        total += p * single_qubit_mean(&branch, 1..n, base)?;
    }
    Ok(total)
}

/// Levels `ξ_k = -log λ_k` of the reduced state, ordered from the largest
/// eigenvalue down. Eigenvalues at or below the cutoff appear as `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSpectrum {
    pub levels: Vec<f64>,
}

impl EntanglementSpectrum {
    pub fn of(state: &QuantumState, cut: &Bipartition, base: LogBase) -> Result<Self> {
        let levels = schmidt_coefficients(state, cut)?
            .into_iter()
            .map(|s| {
                let l = s * s;
                if l > EIGENVALUE_CUTOFF {
                    -base.log(l)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        Ok(Self { levels })
    }

    /// `Σ_k base^{-ξ_k}`, equal to one when nothing was clamped.
    pub fn weight_sum(&self, base: LogBase) -> f64 {
        self.levels
            .iter()
            .filter(|x| x.is_finite())
            .map(|&x| match base {
                LogBase::Two => (-x).exp2(),
                LogBase::Natural => (-x).exp(),
            })
            .sum()
    }
}

/// Sample statistics of the middle-cut spectrum and entropies over an
/// ensemble of states.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumStats {
    /// Per level index, mean of the finite levels.
    pub mean_levels: Vec<f64>,
    /// Per level index, standard deviation of the finite levels.
    pub std_levels: Vec<f64>,
    /// Per level index, number of samples where the level was finite.
    pub level_counts: Vec<usize>,
    pub mean_entropy_middle: f64,
    pub std_entropy_middle: f64,
    pub mean_entropy_single: f64,
    pub n_samples: usize,
}

struct SampleSummary {
    spectrum: EntanglementSpectrum,
    middle: f64,
    single: f64,
}

fn summarize(state: &QuantumState, cut: &Bipartition, base: LogBase) -> Result<SampleSummary> {
    let spectrum = EntanglementSpectrum::of(state, cut, base)?;
    let middle = spectrum
        .levels
        .iter()
        .filter(|x| x.is_finite())
        .map(|&x| {
            let l = match base {
                LogBase::Two => (-x).exp2(),
                LogBase::Natural => (-x).exp(),
            };
            l * x
        })
        .sum::<f64>()
        .max(0.0);
    Ok(SampleSummary {
        spectrum,
        middle,
        single: average_single_qubit_entropy(state, base)?,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn aggregate(samples: &[SampleSummary]) -> SpectrumStats {
    let width = samples
        .iter()
        .map(|s| s.spectrum.levels.len())
        .max()
        .unwrap_or(0);
    let mut mean_levels = Vec::with_capacity(width);
    let mut std_levels = Vec::with_capacity(width);
    let mut level_counts = Vec::with_capacity(width);
    for k in 0..width {
        let finite: Vec<f64> = samples
            .iter()
            .filter_map(|s| s.spectrum.levels.get(k).copied().filter(|x| x.is_finite()))
            .collect();
        let (m, s) = mean_std(&finite);
        mean_levels.push(m);
        std_levels.push(s);
        level_counts.push(finite.len());
    }
    let middles: Vec<f64> = samples.iter().map(|s| s.middle).collect();
    let singles: Vec<f64> = samples.iter().map(|s| s.single).collect();
    let (mean_entropy_middle, std_entropy_middle) = mean_std(&middles);
    SpectrumStats {
        mean_levels,
        std_levels,
        level_counts,
        mean_entropy_middle,
        std_entropy_middle,
        mean_entropy_single: mean_std(&singles).0,
        n_samples: samples.len(),
    }
}

/// Middle-cut statistics of `program` with parameters drawn i.i.d. uniform
/// from `[0, 20π)`. Parameter vectors are drawn sequentially from the seed's
/// spectrum substream, so the result does not depend on thread scheduling.
pub fn spectrum_sample(
    program: &AnsatzProgram,
    h: &CostHamiltonian,
    n: usize,
    n_samples: usize,
    seed: u64,
    base: LogBase,
) -> Result<SpectrumStats> {
    if n_samples == 0 {
        return Err(Error::Configuration(
            "spectrum sampling needs at least one sample".into(),
        ));
    }
    let cut = Bipartition::middle(n)?;
    let mut rng = substream(seed, Stream::SpectrumParameters);
    let draws: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| {
            (0..program.n_parameters())
                .map(|_| rng.random_range(0.0..RANDOM_PARAMETER_RANGE))
                .collect()
        })
        .collect();
    let samples = draws
        .par_iter()
        .map(|params| summarize(&program.evaluate(params, h, n)?, &cut, base))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(&samples))
}

/// Random pure state with i.i.d. complex-normal amplitudes.
pub fn haar_random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuantumState> {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    QuantumState::from_amplitudes(n, amps)
}

/// The same statistics as [`spectrum_sample`] for Haar-random states.
pub fn haar_baseline(
    n: usize,
    cut: &Bipartition,
    n_samples: usize,
    seed: u64,
    base: LogBase,
) -> Result<SpectrumStats> {
    if n_samples == 0 {
        return Err(Error::Configuration(
            "Haar baseline needs at least one sample".into(),
        ));
    }
    let mut rng = substream(seed, Stream::HaarStates);
    let states = (0..n_samples)
        .map(|_| haar_random_state(n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let samples = states
        .par_iter()
        .map(|s| summarize(s, cut, base))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(&samples))
}
