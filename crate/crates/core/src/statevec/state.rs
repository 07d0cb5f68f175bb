//! Dense state vectors and projective measurements.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::statevec::density::DensityMatrix;
use crate::statevec::gate::GateMatrix;
use crate::statevec::pauli::PauliString;
use crate::statevec::{MAX_QUBITS, TOL_ALGEBRAIC};

/// Measurement basis for a single qubit.
///
/// `Rotated(β)` applies H·R_z(β) to the qubit and then measures in Z — the
/// client's combined rotate-and-measure step. `Y` maps the y-eigenbasis onto
/// the computational basis (S† then H) before projecting; outcome `false`
/// corresponds to the +y eigenstate. In both rotated bases the qubit is left
/// in the computational state `|outcome⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureBasis {
    Z,
    Y,
    Rotated(f64),
}

/// Dense complex amplitudes over `num_qubits` qubits, little-endian: qubit 0
/// is the least significant bit of the amplitude index.
#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes, normalising them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidDimension { len });
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let mut state = Self { num_qubits, amps };
        let norm = state.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        state.scale(1.0 / norm);
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Applies a validated unitary to the target qubits.
    pub fn apply_gate(&mut self, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
        if gate.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                arity: gate.arity(),
                targets: targets.len(),
            });
        }
        for &t in targets {
            self.check_qubit(t)?;
        }
        match gate {
            GateMatrix::Single(m) => {
                self.apply_single(m, targets[0]);
                Ok(())
            }
            GateMatrix::Two(m) => {
                if targets[0] == targets[1] {
                    return Err(Error::DuplicateTargets);
                }
                self.apply_two(m, targets[0], targets[1]);
                Ok(())
            }
        }
    }

    fn apply_single(&mut self, m: &[[Complex64; 2]; 2], q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a, b) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn apply_two(&mut self, m: &[[Complex64; 4]; 4], q0: usize, q1: usize) {
        let (b0, b1) = (1usize << q0, 1usize << q1);
        for i in 0..self.amps.len() {
            if i & b0 == 0 && i & b1 == 0 {
                let idx = [i, i | b0, i | b1, i | b0 | b1];
                let old = [
                    self.amps[idx[0]],
                    self.amps[idx[1]],
                    self.amps[idx[2]],
                    self.amps[idx[3]],
                ];
                for (r, &out) in idx.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (col, &a) in old.iter().enumerate() {
                        acc += m[r][col] * a;
                    }
                    self.amps[out] = acc;
                }
            }
        }
    }

    fn rotate_into_z(&mut self, q: usize, basis: MeasureBasis) {
        match basis {
            MeasureBasis::Z => {}
            MeasureBasis::Y => {
                self.apply_single(GateMatrix::s_dag().as_single().unwrap(), q);
                self.apply_single(GateMatrix::h().as_single().unwrap(), q);
            }
            MeasureBasis::Rotated(beta) => {
                self.apply_single(GateMatrix::rz(beta).as_single().unwrap(), q);
                self.apply_single(GateMatrix::h().as_single().unwrap(), q);
            }
        }
    }

    /// Probability that qubit `q` reads 1 in the computational basis.
    pub fn probability_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Born-rule measurement of one qubit; collapses and renormalises.
    pub fn measure_qubit(
        &mut self,
        q: usize,
        basis: MeasureBasis,
        rng: &mut impl Rng,
    ) -> Result<bool> {
        self.check_qubit(q)?;
        self.rotate_into_z(q, basis);
        let p1 = self.probability_one(q)?;
        let outcome = rng.random::<f64>() < p1;
        self.collapse_z(q, outcome);
        Ok(outcome)
    }

    /// Forces a measurement outcome and returns its Born probability.
    /// The state collapses onto the forced branch (renormalised).
    pub fn project_qubit(&mut self, q: usize, basis: MeasureBasis, outcome: bool) -> Result<f64> {
        self.check_qubit(q)?;
        self.rotate_into_z(q, basis);
        let p1 = self.probability_one(q)?;
        let p = if outcome { p1 } else { 1.0 - p1 };
        self.collapse_z(q, outcome);
        Ok(p)
    }

    fn collapse_z(&mut self, q: usize, outcome: bool) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & bit) != 0) != outcome {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let norm = self.norm();
        if norm > 1e-300 {
            self.scale(1.0 / norm);
        }
    }

    /// Resets a disentangled qubit to |+⟩ (a fresh ancilla photon).
    ///
    /// The qubit must currently be in a computational basis state; anything
    /// else is a kernel-ordering defect.
    pub fn reset_to_plus(&mut self, q: usize) -> Result<()> {
        let (bit, _) = self.peek_collapsed(q)?;
        if bit {
            self.apply_single(GateMatrix::x().as_single().unwrap(), q);
        }
        self.apply_single(GateMatrix::h().as_single().unwrap(), q);
        Ok(())
    }

    fn peek_collapsed(&self, q: usize) -> Result<(bool, f64)> {
        let p1 = self.probability_one(q)?;
        if p1 < TOL_ALGEBRAIC {
            Ok((false, p1))
        } else if p1 > 1.0 - TOL_ALGEBRAIC {
            Ok((true, p1))
        } else {
            Err(Error::QubitNotSeparable { qubit: q })
        }
    }

    /// Removes a qubit that is deterministically |0⟩ or |1⟩, returning its
    /// value and the state on the remaining qubits (indices above `q` shift
    /// down by one).
    pub fn factor_out(&self, q: usize) -> Result<(bool, StateVector)> {
        self.check_qubit(q)?;
        let (bit, _) = self.peek_collapsed(q)?;
        let low_mask = (1usize << q) - 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len() / 2];
        for (i, a) in self.amps.iter().enumerate() {
            if ((i >> q) & 1 == 1) == bit {
                let reduced = (i & low_mask) | ((i >> (q + 1)) << q);
                amps[reduced] = *a;
            }
        }
        Ok((bit, StateVector::from_amplitudes(amps)?))
    }

    /// Reduced density matrix on `keep` (deduplicated, reported in ascending
    /// qubit order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for &q in &keep {
            self.check_qubit(q)?;
        }
        let k = keep.len();
        let env: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let dim_k = 1usize << k;
        let dim_e = 1usize << env.len();
        let compose = |kept_idx: usize, env_idx: usize| -> usize {
            let mut full = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                if (kept_idx >> pos) & 1 == 1 {
                    full |= 1 << q;
                }
            }
            for (pos, &q) in env.iter().enumerate() {
                if (env_idx >> pos) & 1 == 1 {
                    full |= 1 << q;
                }
            }
            full
        };
        let mut rho = DensityMatrix::zeros(k)?;
        for r in 0..dim_k {
            for col in 0..dim_k {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..dim_e {
                    acc += self.amps[compose(r, e)] * self.amps[compose(col, e)].conj();
                }
                rho.set(r, col, acc);
            }
        }
        Ok(rho)
    }

    /// ⟨ψ| w·P |ψ⟩ for a weighted Pauli string covering every qubit.
    pub fn expectation(&self, obs: &PauliString) -> Result<f64> {
        if obs.len() != self.num_qubits {
            return Err(Error::PauliLengthMismatch {
                expected: self.num_qubits,
                got: obs.len(),
            });
        }
        let xm = obs.x_mask();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            let coeff = obs.basis_coeff(i);
            acc += self.amps[i ^ xm].conj() * coeff * a;
        }
        Ok(acc.re * obs.weight())
    }

    /// |⟨a|b⟩|² — the global-phase-insensitive comparison used everywhere.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                a: self.dim(),
                b: other.dim(),
            });
        }
        let ip: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(ip.norm_sqr())
    }
}
