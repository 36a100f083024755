//! Dense-matrix reference implementations built from Kronecker products and
//! a general matrix exponential, sharing no kernels with the library.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qaoa_entangle::problem::WeightedGraph;
use qaoa_entangle::sim::{MixerOperator, Pauli, QuantumState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma(p: Option<Pauli>) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        None => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Pauli::X) => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Pauli::Y) => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Pauli::Z) => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Tensor product with qubit `n-1` leftmost, so qubit q is bit q of the index.
pub fn pauli_matrix(n: usize, factors: &[(usize, Pauli)]) -> CMat {
    let mut m = CMat::identity(1, 1);
    for q in (0..n).rev() {
        let p = factors.iter().find(|(k, _)| *k == q).map(|(_, p)| *p);
        m = m.kronecker(&sigma(p));
    }
    m
}

pub fn mixer_matrix(n: usize, mixer: &MixerOperator) -> CMat {
    let dim = 1 << n;
    match mixer {
        MixerOperator::SumX => (0..n).fold(CMat::zeros(dim, dim), |acc, q| {
            acc + pauli_matrix(n, &[(q, Pauli::X)])
        }),
        MixerOperator::SumY => (0..n).fold(CMat::zeros(dim, dim), |acc, q| {
            acc + pauli_matrix(n, &[(q, Pauli::Y)])
        }),
        MixerOperator::String(s) => pauli_matrix(n, s.factors()),
    }
}

/// `½ Σ w Z_i Z_j + f Z_0` from the graph itself.
pub fn hamiltonian_matrix(g: &WeightedGraph, f: f64) -> CMat {
    let n = g.n_vertices;
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for &(i, j, w) in &g.edges {
        h += pauli_matrix(n, &[(i, Pauli::Z), (j, Pauli::Z)]) * c(0.5 * w, 0.0);
    }
    if f != 0.0 {
        h += pauli_matrix(n, &[(0, Pauli::Z)]) * c(f, 0.0);
    }
    h
}

/// `e^{-i t A}` by the general matrix exponential.
pub fn evolve(a: &CMat, t: f64) -> CMat {
    (a * c(0.0, -t)).exp()
}

pub fn vector(state: &QuantumState) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

pub fn expectation(a: &CMat, psi: &DVector<Complex64>) -> f64 {
    psi.dotc(&(a * psi)).re
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> QuantumState {
    let amps = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    QuantumState::from_amplitudes(n, amps).unwrap()
}

pub fn random_graph(n: usize, rng: &mut impl Rng) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.7) {
                edges.push((i, j, rng.random_range(1..=9) as f64 / 10.0));
            }
        }
    }
    if edges.is_empty() && n >= 2 {
        edges.push((0, 1, 0.5));
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn random_pauli(rng: &mut impl Rng) -> Pauli {
    [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)]
}

/// Random single-qubit, two-qubit or global mixer on `n` qubits.
pub fn random_mixer(n: usize, rng: &mut impl Rng) -> MixerOperator {
    match rng.random_range(0..4) {
        0 => MixerOperator::SumX,
        1 => MixerOperator::SumY,
        2 => MixerOperator::single(rng.random_range(0..n), random_pauli(rng)),
        _ => {
            let j = rng.random_range(0..n);
            let k = (j + rng.random_range(1..n)) % n;
            MixerOperator::pair(j, random_pauli(rng), k, random_pauli(rng)).unwrap()
        }
    }
}

/// Brute-force Max-Cut weight over all bipartitions.
pub fn max_cut(g: &WeightedGraph) -> f64 {
    (0..1usize << g.n_vertices)
        .map(|s| {
            g.edges
                .iter()
                .filter(|(i, j, _)| ((s >> i) ^ (s >> j)) & 1 == 1)
                .map(|e| e.2)
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Reduced density matrix on the qubits in `a` by explicit partial trace.
pub fn reduced_density(state: &QuantumState, a: &[usize]) -> CMat {
    let n = state.n_qubits();
    let b: Vec<usize> = (0..n).filter(|q| !a.contains(q)).collect();
    let da = 1 << a.len();
    let amps = state.amplitudes();
    let compose = |ia: usize, ib: usize| -> usize {
        let mut idx = 0;
        for (k, &q) in a.iter().enumerate() {
            idx |= ((ia >> k) & 1) << q;
        }
        for (k, &q) in b.iter().enumerate() {
            idx |= ((ib >> k) & 1) << q;
        }
        idx
    };
    let mut rho = CMat::zeros(da, da);
    for r in 0..da {
        for s in 0..da {
            let mut acc = c(0.0, 0.0);
            for ib in 0..1usize << b.len() {
                acc += amps[compose(r, ib)] * amps[compose(s, ib)].conj();
            }
            rho[(r, s)] = acc;
        }
    }
    rho
}

/// Von Neumann entropy in bits from a Hermitian eigensolve of `ρ_A`.
pub fn dense_entropy_bits(state: &QuantumState, a: &[usize]) -> f64 {
    let rho = reduced_density(state, a);
    rho.symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 1e-12)
        .map(|&l| -l * l.log2())
        .sum()
}
