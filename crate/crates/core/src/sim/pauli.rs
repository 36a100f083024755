use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A tensor product of single-qubit Paulis in bitmask form.
///
/// The operator is `i^{n_y} X^{x_mask} Z^{z_mask}`, which equals the product
/// of the listed factors since `Y = iXZ` on each qubit. Acting on a basis
/// state, `P|b> = phase(b) |b ^ x_mask>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    factors: Vec<(usize, Pauli)>,
    x_mask: usize,
    z_mask: usize,
    n_y: u32,
}

impl PauliString {
    pub fn new(factors: Vec<(usize, Pauli)>) -> Result<Self> {
        let mut x_mask = 0usize;
        let mut z_mask = 0usize;
        let mut n_y = 0u32;
        let mut seen = 0usize;
        for &(q, p) in &factors {
            if q >= usize::BITS as usize - 1 {
                return Err(Error::ContractViolation(format!(
                    "qubit index {q} out of range"
                )));
            }
            let bit = 1usize << q;
            if seen & bit != 0 {
                return Err(Error::ContractViolation(format!(
                    "qubit {q} appears twice in a Pauli string"
                )));
            }
            seen |= bit;
            match p {
                Pauli::X => x_mask |= bit,
                Pauli::Z => z_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    n_y += 1;
                }
            }
        }
        Ok(Self {
            factors,
            x_mask,
            z_mask,
            n_y,
        })
    }

    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn x_mask(&self) -> usize {
        self.x_mask
    }

    pub fn z_mask(&self) -> usize {
        self.z_mask
    }

    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// Highest qubit index touched, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.iter().map(|&(q, _)| q).max()
    }

    /// Phase picked up by basis state `b`: `P|b> = phase(b)|b ^ x_mask>`.
    #[inline]
    pub fn phase(&self, b: usize) -> Complex64 {
        let sign = if (b & self.z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        match self.n_y % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        }
    }

    /// Eigenvalue (+1 or -1) on basis state `b`; only meaningful for diagonal strings.
    #[inline]
    pub fn diagonal_sign(&self, b: usize) -> f64 {
        if (b & self.z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let overlap =
            (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        overlap.is_multiple_of(2)
    }

    /// Whether this string anticommutes with the global flip `F = X^{⊗n}`.
    pub fn anticommutes_with_flip(&self) -> bool {
        self.z_mask.count_ones() % 2 == 1
    }

    /// out = P · psi
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for (b, &amp) in psi.iter().enumerate() {
            out[b ^ self.x_mask] = self.phase(b) * amp;
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(q, p) in &self.factors {
            write!(f, "{}{}", p.letter(), q)?;
        }
        Ok(())
    }
}

/// A weighted Pauli string `c · P`, the unit Hamiltonians are built from.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    string: PauliString,
    coefficient: f64,
}

impl PauliTerm {
    pub fn new(factors: Vec<(usize, Pauli)>, coefficient: f64) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::ContractViolation(format!(
                "non-finite Pauli coefficient {coefficient}"
            )));
        }
        Ok(Self {
            string: PauliString::new(factors)?,
            coefficient,
        })
    }

    pub fn zz(i: usize, j: usize, coefficient: f64) -> Result<Self> {
        Self::new(vec![(i, Pauli::Z), (j, Pauli::Z)], coefficient)
    }

    pub fn z(i: usize, coefficient: f64) -> Result<Self> {
        Self::new(vec![(i, Pauli::Z)], coefficient)
    }

    pub fn string(&self) -> &PauliString {
        &self.string
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }
}

/// Generator of a mixer layer.
///
/// `SumX` and `SumY` are the global mixers `M = Σ X_i` and `N = Σ Y_i`; the
/// rest are single Pauli strings with unit coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MixerOperator {
    SumX,
    SumY,
    String(PauliString),
}

impl MixerOperator {
    pub fn single(q: usize, p: Pauli) -> Self {
        MixerOperator::String(PauliString::new(vec![(q, p)]).expect("single-qubit string"))
    }

    pub fn pair(j: usize, pj: Pauli, k: usize, pk: Pauli) -> Result<Self> {
        Ok(MixerOperator::String(PauliString::new(vec![
            (j, pj),
            (k, pk),
        ])?))
    }

    /// Number of qubits the generator acts on non-trivially within a single
    /// exponential; global sums factor into one-qubit rotations and report 1.
    pub fn locality(&self) -> usize {
        match self {
            MixerOperator::SumX | MixerOperator::SumY => 1,
            MixerOperator::String(s) => s.weight(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, MixerOperator::String(s) if s.weight() == 2)
    }

    pub fn anticommutes_with_flip(&self) -> bool {
        match self {
            MixerOperator::SumX => false,
            MixerOperator::SumY => true,
            MixerOperator::String(s) => s.anticommutes_with_flip(),
        }
    }

    pub fn token(&self) -> String {
        self.to_string()
    }

    pub(crate) fn validate_for(&self, n_qubits: usize) -> Result<()> {
        if let MixerOperator::String(s) = self {
            if s.max_qubit().is_some_and(|q| q >= n_qubits) {
                return Err(Error::ContractViolation(format!(
                    "mixer {self} addresses a qubit outside a {n_qubits}-qubit register"
                )));
            }
        }
        Ok(())
    }

    /// out = A · psi
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) {
        match self {
            MixerOperator::String(s) => s.apply_into(psi, out),
            MixerOperator::SumX | MixerOperator::SumY => {
                let n = psi.len().trailing_zeros() as usize;
                let y = matches!(self, MixerOperator::SumY);
                for (b, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for q in 0..n {
                        let src = b ^ (1 << q);
                        let amp = psi[src];
                        if y {
                            // Y|0> = i|1>, Y|1> = -i|0>: source bit decides the sign.
                            if src & (1 << q) == 0 {
                                acc += Complex64::i() * amp;
                            } else {
                                acc -= Complex64::i() * amp;
                            }
                        } else {
                            acc += amp;
                        }
                    }
                    *o = acc;
                }
            }
        }
    }
}

impl fmt::Display for MixerOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixerOperator::SumX => write!(f, "M"),
            MixerOperator::SumY => write!(f, "N"),
            MixerOperator::String(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for MixerOperator {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        match token {
            "M" => return Ok(MixerOperator::SumX),
            "N" => return Ok(MixerOperator::SumY),
            "" => return Err(Error::Parse("empty mixer token".into())),
            _ => {}
        }
        let mut factors = Vec::new();
        let mut chars = token.chars().peekable();
        while let Some(c) = chars.next() {
            let p = Pauli::from_letter(c).ok_or_else(|| {
                Error::Parse(format!("bad Pauli letter {c:?} in token {token:?}"))
            })?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q = digits
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("missing qubit index in token {token:?}")))?;
            factors.push((q, p));
        }
        Ok(MixerOperator::String(PauliString::new(factors)?))
    }
}

impl Serialize for MixerOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for MixerOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
