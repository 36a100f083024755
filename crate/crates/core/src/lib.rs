//! Statevector laboratory for standard QAOA and ADAPT-QAOA on weighted
//! Max-Cut, with entanglement-entropy, entanglement-spectrum and CNOT
//! accounting along the layer-by-layer optimization.

pub mod adapt;
pub mod ansatz;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod optimizer;
pub mod problem;
pub mod resources;
pub mod seeding;
pub mod sim;

pub use error::{Error, Result};
