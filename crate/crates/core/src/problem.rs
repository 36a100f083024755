//! Weighted Max-Cut instances and their Ising cost Hamiltonians.
//!
//! The cost Hamiltonian is `H = ½ Σ w_ij Z_i Z_j`, optionally perturbed by a
//! field `f Z_0` that lifts the global bit-flip degeneracy. Max-Cut weight and
//! the ground energy of `H` are related by `cut = Σw/2 - E_min`.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{substream, Stream};
use crate::sim::{diagonal_energies, PauliTerm};

/// Largest register the exhaustive ground-state search accepts.
pub const MAX_BRUTE_FORCE_QUBITS: usize = 24;
/// Energies closer than this to the minimum count as ground states.
const GROUND_TOLERANCE: f64 = 1e-9;
const PAIRING_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub n_vertices: usize,
    /// `(i, j, w)` with `i < j`.
    pub edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n_vertices: usize, mut edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
            if e.0 == e.1 || e.1 >= n_vertices {
                return Err(Error::Construction(format!(
                    "invalid edge ({}, {}) for {n_vertices} vertices",
                    e.0, e.1
                )));
            }
            if !e.2.is_finite() {
                return Err(Error::Construction(format!(
                    "non-finite weight on ({}, {})",
                    e.0, e.1
                )));
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        if edges
            .windows(2)
            .any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::Construction("duplicate edge".into()));
        }
        Ok(Self { n_vertices, edges })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices];
        for &(i, j, _) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }
}

/// Random `degree`-regular graph on `n` vertices with weights drawn uniformly
/// from `{0.1, 0.2, …, 0.9}`. `degree = n - 1` yields the complete graph.
pub fn generate_instance(n: usize, degree: usize, seed: u64) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::Construction(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    if degree >= n || !(n * degree).is_multiple_of(2) {
        return Err(Error::Construction(format!(
            "no simple {degree}-regular graph on {n} vertices"
        )));
    }
    let pairs = if degree == n - 1 {
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect::<Vec<_>>()
    } else {
        random_regular_pairs(n, degree, seed)?
    };
    let mut rng = substream(seed, Stream::EdgeWeights);
    let edges = pairs
        .into_iter()
        .map(|(i, j)| {
            let tenths: u32 = rng.random_range(1..=9);
            (i, j, f64::from(tenths) / 10.0)
        })
        .collect();
    WeightedGraph::new(n, edges)
}

/// Pairing-model construction with rejection of loops and multi-edges.
fn random_regular_pairs(n: usize, degree: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    let mut rng = substream(seed, Stream::GraphPairing);
    let mut stubs: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut pairs: Vec<(usize, usize)> = stubs
            .chunks_exact(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                continue 'attempt;
            }
        }
        if pairs.iter().any(|p| p.0 == p.1) {
            continue;
        }
        return Ok(pairs);
    }
    Err(Error::Construction(format!(
        "pairing model failed for n={n}, degree={degree}"
    )))
}

/// Diagonal Ising Hamiltonian `f Z_0 + ½ Σ w_ij Z_i Z_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostHamiltonian {
    n_qubits: usize,
    zz_terms: Vec<(usize, usize, f64)>,
    field: Option<f64>,
    terms: Vec<PauliTerm>,
    diagonal: Vec<f64>,
}

impl CostHamiltonian {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `(i, j, w/2)` per edge.
    pub fn zz_terms(&self) -> &[(usize, usize, f64)] {
        &self.zz_terms
    }

    /// Coefficient `f` of `Z_0`, if the symmetry-breaking field is on.
    pub fn field(&self) -> Option<f64> {
        self.field
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Energies of all computational basis states.
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Number of ZZ couplings with a nonzero coefficient.
    pub fn coupling_count(&self) -> usize {
        self.zz_terms.iter().filter(|t| t.2 != 0.0).count()
    }
}

pub fn build_hamiltonian(g: &WeightedGraph, f: f64) -> Result<CostHamiltonian> {
    if !(f >= 0.0 && f.is_finite()) {
        return Err(Error::Domain(format!(
            "field strength must be finite and >= 0, got {f}"
        )));
    }
    let zz_terms: Vec<_> = g.edges.iter().map(|&(i, j, w)| (i, j, w / 2.0)).collect();
    let field = (f > 0.0).then_some(f);
    let mut terms = Vec::with_capacity(zz_terms.len() + 1);
    if let Some(f) = field {
        terms.push(PauliTerm::z(0, f)?);
    }
    for &(i, j, c) in &zz_terms {
        terms.push(PauliTerm::zz(i, j, c)?);
    }
    let diagonal = diagonal_energies(&terms, g.n_vertices)?;
    Ok(CostHamiltonian {
        n_qubits: g.n_vertices,
        zz_terms,
        field,
        terms,
        diagonal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub min_energy: f64,
    pub max_cut_value: f64,
    pub ground_bitstrings: Vec<usize>,
    pub degeneracy: usize,
}

fn zz_energy(zz: &[(usize, usize, f64)], b: usize) -> f64 {
    zz.iter()
        .map(|&(i, j, c)| {
            if ((b >> i) ^ (b >> j)) & 1 == 0 {
                c
            } else {
                -c
            }
        })
        .sum()
}

/// Exhaustive search over all `2^n` bitstrings.
///
/// The Max-Cut value always refers to the unperturbed couplings, so errors
/// are comparable with and without the field.
pub fn brute_force(h: &CostHamiltonian, n: usize) -> Result<GroundTruth> {
    if n > MAX_BRUTE_FORCE_QUBITS {
        return Err(Error::Size(format!(
            "brute force limited to {MAX_BRUTE_FORCE_QUBITS} qubits, got {n}"
        )));
    }
    if n != h.n_qubits {
        return Err(Error::Size(format!(
            "Hamiltonian is on {} qubits, asked for {n}",
            h.n_qubits
        )));
    }
    let field = h.field.unwrap_or(0.0);
    let mut min_energy = f64::INFINITY;
    let mut min_unperturbed = f64::INFINITY;
    let mut energies = Vec::with_capacity(1 << n);
    for b in 0..1usize << n {
        let e0 = zz_energy(&h.zz_terms, b);
        let e = e0 + if b & 1 == 0 { field } else { -field };
        min_energy = min_energy.min(e);
        min_unperturbed = min_unperturbed.min(e0);
        energies.push(e);
    }
    let ground_bitstrings: Vec<usize> = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= min_energy + GROUND_TOLERANCE)
        .map(|(b, _)| b)
        .collect();
    let half_weight: f64 = h.zz_terms.iter().map(|t| t.2).sum();
    Ok(GroundTruth {
        min_energy,
        max_cut_value: half_weight - min_unperturbed,
        degeneracy: ground_bitstrings.len(),
        ground_bitstrings,
    })
}

/// `(E - E_min) / MaxCut`
pub fn normalized_error(energy: f64, truth: &GroundTruth) -> Result<f64> {
    if truth.max_cut_value <= 0.0 {
        return Err(Error::DegenerateInstance(format!(
            "Max-Cut value {} is not positive",
            truth.max_cut_value
        )));
    }
    Ok((energy - truth.min_energy) / truth.max_cut_value)
}

/// On-disk form of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub degree: usize,
    pub seed: u64,
    pub edges: Vec<(usize, usize, f64)>,
    pub f: f64,
}

impl InstanceFile {
    pub fn new(graph: &WeightedGraph, degree: usize, seed: u64, f: f64) -> Self {
        Self {
            n: graph.n_vertices,
            degree,
            seed,
            edges: graph.edges.clone(),
            f,
        }
    }

    pub fn graph(&self) -> Result<WeightedGraph> {
        WeightedGraph::new(self.n, self.edges.clone())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::harness::io::write_atomic(path, serde_json::to_string_pretty(self)?.as_bytes())
    }
}
