use num_complex::Complex64;

use super::pauli::{MixerOperator, PauliString, PauliTerm};
use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;
/// Allowed drift of the state norm from one.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Largest imaginary residue tolerated on quantities that must be real.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Dense statevector. Qubit `q` is bit `q` of the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Size(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl QuantumState {
    /// |+>^{⊗n}
    pub fn plus(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let a = (dim as f64).sqrt().recip();
        Ok(Self {
            n_qubits: n,
            amplitudes: vec![Complex64::new(a, 0.0); dim],
        })
    }

    /// |1>_0 ⊗ |+>^{⊗(n-1)}
    pub fn symmetry_broken(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let a = ((dim / 2) as f64).sqrt().recip();
        let amplitudes = (0..dim)
            .map(|b| {
                if b & 1 == 1 {
                    Complex64::new(a, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::Size(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::Size(format!(
                "{} amplitudes for {n} qubits",
                amplitudes.len()
            )));
        }
        let mut s = Self {
            n_qubits: n,
            amplitudes,
        };
        let norm = s.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NumericIntegrity(format!(
                "cannot normalize, norm = {norm}"
            )));
        }
        s.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_terms(&self, terms: &[PauliTerm]) -> Result<()> {
        for t in terms {
            if t.string().max_qubit().is_some_and(|q| q >= self.n_qubits) {
                return Err(Error::ContractViolation(format!(
                    "term {} addresses a qubit outside a {}-qubit register",
                    t.string(),
                    self.n_qubits
                )));
            }
        }
        Ok(())
    }

    /// Multiplies each amplitude by `exp(-i γ E(z))` for a precomputed diagonal.
    pub fn apply_diagonal_phases(&mut self, diagonal: &[f64], gamma: f64) {
        debug_assert_eq!(diagonal.len(), self.amplitudes.len());
        for (a, &e) in self.amplitudes.iter_mut().zip(diagonal) {
            let (s, c) = (gamma * e).sin_cos();
            *a *= Complex64::new(c, -s);
        }
    }

    /// `exp(-i γ H)` for an all-Z Hamiltonian.
    pub fn apply_diagonal_evolution(
        &mut self,
        hamiltonian: &[PauliTerm],
        gamma: f64,
    ) -> Result<()> {
        let diagonal = diagonal_energies(hamiltonian, self.n_qubits)?;
        self.apply_diagonal_phases(&diagonal, gamma);
        Ok(())
    }

    /// `exp(-i β P) = cos β · I - i sin β · P`, applied in place pairwise.
    pub fn apply_string_rotation(&mut self, p: &PauliString, beta: f64) {
        let (s, c) = beta.sin_cos();
        let x = p.x_mask();
        let psi = &mut self.amplitudes;
        if x == 0 {
            for (b, a) in psi.iter_mut().enumerate() {
                *a *= Complex64::new(c, 0.0) - Complex64::new(0.0, s) * p.phase(b);
            }
            return;
        }
        let minus_is = Complex64::new(0.0, -s);
        for b in 0..psi.len() {
            let partner = b ^ x;
            if partner < b {
                continue;
            }
            let (a, d) = (psi[b], psi[partner]);
            // (Pψ)[b] = phase(partner)·ψ[partner], (Pψ)[partner] = phase(b)·ψ[b]
            psi[b] = c * a + minus_is * p.phase(partner) * d;
            psi[partner] = c * d + minus_is * p.phase(b) * a;
        }
    }

    /// `exp(-i β A)` for a mixer generator. Global sums are applied as a
    /// product of commuting single-qubit rotations.
    pub fn apply_mixer_rotation(&mut self, mixer: &MixerOperator, beta: f64) -> Result<()> {
        mixer.validate_for(self.n_qubits)?;
        match mixer {
            MixerOperator::String(p) => self.apply_string_rotation(p, beta),
            MixerOperator::SumX | MixerOperator::SumY => {
                let axis = if matches!(mixer, MixerOperator::SumX) {
                    super::Pauli::X
                } else {
                    super::Pauli::Y
                };
                for q in 0..self.n_qubits {
                    let p = PauliString::new(vec![(q, axis)])?;
                    self.apply_string_rotation(&p, beta);
                }
            }
        }
        Ok(())
    }

    /// `exp(-i β Σ c_k P_k)` for a sum of pairwise-commuting terms.
    pub fn apply_pauli_rotation(&mut self, terms: &[PauliTerm], beta: f64) -> Result<()> {
        self.check_terms(terms)?;
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                if !a.string().commutes_with(b.string()) {
                    return Err(Error::ContractViolation(format!(
                        "terms {} and {} do not commute",
                        a.string(),
                        b.string()
                    )));
                }
            }
        }
        for t in terms {
            self.apply_string_rotation(t.string(), beta * t.coefficient());
        }
        Ok(())
    }

    /// `Σ_k c_k <ψ|P_k|ψ>`
    pub fn expectation(&self, hamiltonian: &[PauliTerm]) -> Result<f64> {
        self.check_terms(hamiltonian)?;
        let mut total = Complex64::new(0.0, 0.0);
        for t in hamiltonian {
            let p = t.string();
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, &amp) in self.amplitudes.iter().enumerate() {
                acc += self.amplitudes[b ^ p.x_mask()].conj() * p.phase(b) * amp;
            }
            total += acc * t.coefficient();
        }
        real_part(total, "expectation value")
    }

    /// `<ψ|D|ψ>` for a diagonal operator given by its diagonal.
    pub fn diagonal_expectation(&self, diagonal: &[f64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(diagonal)
            .map(|(a, e)| a.norm_sqr() * e)
            .sum()
    }

    /// `i <ψ|[A, H]|ψ>`, the derivative of `<e^{iβA} H e^{-iβA}>` at β = 0.
    pub fn commutator_expectation(&self, a: &MixerOperator, h: &[PauliTerm]) -> Result<f64> {
        a.validate_for(self.n_qubits)?;
        self.check_terms(h)?;
        let h_psi = apply_terms(h, &self.amplitudes);
        let mut a_psi = vec![Complex64::new(0.0, 0.0); self.dim()];
        a.apply_into(&self.amplitudes, &mut a_psi);
        commutator_from_images(&a_psi, &h_psi)
    }
}

/// `i(<Aψ|Hψ> - <Hψ|Aψ>)` given the two images of ψ.
pub fn commutator_from_images(a_psi: &[Complex64], h_psi: &[Complex64]) -> Result<f64> {
    let ah: Complex64 = a_psi.iter().zip(h_psi).map(|(a, h)| a.conj() * h).sum();
    let ha: Complex64 = h_psi.iter().zip(a_psi).map(|(h, a)| h.conj() * a).sum();
    real_part(Complex64::i() * (ah - ha), "commutator expectation")
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    let scale = z.re.abs().max(1.0);
    if z.im.abs() > HERMITICITY_TOLERANCE * scale {
        return Err(Error::NumericIntegrity(format!(
            "{what} has imaginary residue {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// H·ψ for a general sum of Pauli terms.
pub fn apply_terms(terms: &[PauliTerm], psi: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for t in terms {
        let p = t.string();
        for (b, &amp) in psi.iter().enumerate() {
            out[b ^ p.x_mask()] += p.phase(b) * amp * t.coefficient();
        }
    }
    out
}

/// Diagonal of an all-Z Hamiltonian over the `2^n` computational basis states.
pub fn diagonal_energies(hamiltonian: &[PauliTerm], n: usize) -> Result<Vec<f64>> {
    check_size(n)?;
    for t in hamiltonian {
        if !t.string().is_diagonal() {
            return Err(Error::ContractViolation(format!(
                "term {} is not diagonal in the computational basis",
                t.string()
            )));
        }
        if t.string().max_qubit().is_some_and(|q| q >= n) {
            return Err(Error::ContractViolation(format!(
                "term {} addresses a qubit outside a {n}-qubit register",
                t.string()
            )));
        }
    }
    Ok((0..1usize << n)
        .map(|b| {
            hamiltonian
                .iter()
                .map(|t| t.coefficient() * t.string().diagonal_sign(b))
                .sum()
        })
        .collect())
}
