//! Dense statevector simulation: Pauli strings, mixer generators, and the
//! unitary and measurement primitives the rest of the crate is built on.

mod pauli;
mod state;

pub use pauli::{MixerOperator, Pauli, PauliString, PauliTerm};
pub use state::{
    apply_terms, commutator_from_images, diagonal_energies, QuantumState, HERMITICITY_TOLERANCE,
    MAX_QUBITS, NORM_TOLERANCE,
};
