//! Layered QAOA-style ansatz programs.
//!
//! A program is a reference state followed by layers `e^{-iβ_l A_l} e^{-iγ_l H}`.
//! Parameters are laid out as `(γ_1, β_1, γ_2, β_2, …)`. The same cost
//! Hamiltonian drives the evolution and the objective; whether it carries the
//! symmetry-breaking field is decided by whoever builds it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::CostHamiltonian;
use crate::sim::{MixerOperator, QuantumState};

/// Default initial value for a freshly appended cost angle.
pub const DEFAULT_GAMMA0: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reference {
    /// |+>^{⊗n}
    AllPlus,
    /// |1>_0 ⊗ |+>^{⊗(n-1)}
    SymmetryBroken,
}

impl Reference {
    pub fn prepare(self, n: usize) -> Result<QuantumState> {
        match self {
            Reference::AllPlus => QuantumState::plus(n),
            Reference::SymmetryBroken => QuantumState::symmetry_broken(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub gamma: f64,
    pub beta: f64,
    pub mixer: MixerOperator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzProgram {
    reference: Reference,
    mixers: Vec<MixerOperator>,
}

impl AnsatzProgram {
    pub fn new(reference: Reference) -> Self {
        Self {
            reference,
            mixers: Vec::new(),
        }
    }

    pub fn with_mixers(reference: Reference, mixers: Vec<MixerOperator>) -> Self {
        Self { reference, mixers }
    }

    /// Standard QAOA: `p` layers of the global X mixer.
    pub fn standard(reference: Reference, p: usize) -> Self {
        Self::with_mixers(reference, vec![MixerOperator::SumX; p])
    }

    pub fn reference(&self) -> Reference {
        self.reference
    }

    pub fn mixers(&self) -> &[MixerOperator] {
        &self.mixers
    }

    pub fn depth(&self) -> usize {
        self.mixers.len()
    }

    pub fn n_parameters(&self) -> usize {
        2 * self.mixers.len()
    }

    pub fn push(&mut self, mixer: MixerOperator) {
        self.mixers.push(mixer);
    }

    /// The first `p` layers of this program.
    pub fn truncated(&self, p: usize) -> Self {
        Self::with_mixers(self.reference, self.mixers[..p.min(self.depth())].to_vec())
    }

    pub fn layers(&self, params: &[f64]) -> Result<Vec<Layer>> {
        self.check_arity(params)?;
        Ok(self
            .mixers
            .iter()
            .zip(params.chunks_exact(2))
            .map(|(m, p)| Layer {
                gamma: p[0],
                beta: p[1],
                mixer: m.clone(),
            })
            .collect())
    }

    /// Rebuilds a program and its parameter vector from serialized layers.
    pub fn from_layers(reference: Reference, layers: &[Layer]) -> (Self, Vec<f64>) {
        let program =
            Self::with_mixers(reference, layers.iter().map(|l| l.mixer.clone()).collect());
        let params = layers.iter().flat_map(|l| [l.gamma, l.beta]).collect();
        (program, params)
    }

    fn check_arity(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_parameters() {
            return Err(Error::Arity {
                expected: self.n_parameters(),
                got: params.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, params: &[f64], h: &CostHamiltonian, n: usize) -> Result<QuantumState> {
        self.check_arity(params)?;
        if h.n_qubits() != n {
            return Err(Error::Size(format!(
                "Hamiltonian on {} qubits, ansatz on {n}",
                h.n_qubits()
            )));
        }
        let mut state = self.reference.prepare(n)?;
        for (mixer, p) in self.mixers.iter().zip(params.chunks_exact(2)) {
            state.apply_diagonal_phases(h.diagonal(), p[0]);
            state.apply_mixer_rotation(mixer, p[1])?;
        }
        Ok(state)
    }

    pub fn energy_of(&self, params: &[f64], h: &CostHamiltonian, n: usize) -> Result<f64> {
        Ok(self
            .evaluate(params, h, n)?
            .diagonal_expectation(h.diagonal()))
    }
}

/// Previous optimum followed by `(γ0, 0)` for the new layer.
pub fn warm_start_params(previous_optimal: &[f64], gamma0: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(previous_optimal.len() + 2);
    v.extend_from_slice(previous_optimal);
    v.extend([gamma0, 0.0]);
    v
}
