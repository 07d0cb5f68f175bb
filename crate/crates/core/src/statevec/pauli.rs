//! Pauli strings: tensor products of I, X, Y, Z with an optional real weight.

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Symplectic (x, z) representation: X=(1,0), Z=(0,1), Y=(1,1).
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{ch}")
    }
}

/// A weighted Pauli observable, e.g. `-0.5 * XI`.
///
/// The letter at position 0 acts on qubit 0 (little-endian qubit order, so a
/// string reads low-to-high qubit left-to-right).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    weight: f64,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self {
            letters,
            weight: 1.0,
        }
    }

    pub fn with_weight(letters: Vec<Pauli>, weight: f64) -> Self {
        assert!(weight.is_finite(), "Pauli weight must be finite");
        Self { letters, weight }
    }

    /// Same letters, weight reset to 1 (the form a server announces).
    pub fn unweighted(&self) -> Self {
        Self::new(self.letters.clone())
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn set_weight(&mut self, w: f64) {
        assert!(w.is_finite(), "Pauli weight must be finite");
        self.weight = w;
    }

    /// Bit mask of qubits whose letter flips the computational basis (X or Y).
    pub fn x_mask(&self) -> usize {
        let mut m = 0usize;
        for (q, p) in self.letters.iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                m |= 1 << q;
            }
        }
        m
    }

    /// Amplitude factor the unweighted string contributes on basis state `idx`
    /// (the output basis state is `idx ^ x_mask()`).
    pub fn basis_coeff(&self, idx: usize) -> Complex64 {
        let mut coeff = Complex64::new(1.0, 0.0);
        for (q, p) in self.letters.iter().enumerate() {
            let bit = (idx >> q) & 1 == 1;
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Z => {
                    if bit {
                        coeff = -coeff;
                    }
                }
                Pauli::Y => {
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    coeff *= if bit {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                }
            }
        }
        coeff
    }

    /// Dense matrix of the weighted string; dimension 2^len.
    pub fn dense_matrix(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << self.letters.len();
        let xm = self.x_mask();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            let row = col ^ xm;
            m[row][col] = self.basis_coeff(col) * self.weight;
        }
        m
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let p = match ch.to_ascii_uppercase() {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => {
                    return Err(Error::UnknownPauliLetter {
                        token: other.to_string(),
                    })
                }
            };
            letters.push(p);
        }
        Ok(PauliString::new(letters))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p: PauliString = "XIZY".parse().unwrap();
        assert_eq!(p.to_string(), "XIZY");
        assert_eq!(p.letter(0), Pauli::X);
        assert_eq!(p.letter(2), Pauli::Z);
    }

    #[test]
    fn unknown_letter_names_the_token() {
        let err = PauliString::parse("ZQ").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('Q'), "message should name the token: {msg}");
    }

    #[test]
    fn dense_matrix_of_y() {
        let p: PauliString = "Y".parse().unwrap();
        let m = p.dense_matrix();
        assert_eq!(m[1][0], Complex64::new(0.0, 1.0));
        assert_eq!(m[0][1], Complex64::new(0.0, -1.0));
    }
}
