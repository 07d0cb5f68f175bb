//! Density matrices for the server's averaged view.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::pauli::PauliString;
use crate::statevec::state::StateVector;
use crate::statevec::MAX_QUBITS;

/// Dense 2^n × 2^n Hermitian matrix, row-major.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        Ok(Self {
            num_qubits,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let mut rho = Self::zeros(state.num_qubits()).expect("state within qubit cap");
        rho.accumulate_pure(1.0, state);
        rho
    }

    /// I / 2^n.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        let mut rho = Self::zeros(num_qubits)?;
        let dim = rho.dim();
        let p = 1.0 / dim as f64;
        for i in 0..dim {
            rho.set(i, i, Complex64::new(p, 0.0));
        }
        Ok(rho)
    }

    /// ρ += weight · |ψ⟩⟨ψ|; used to average over measurement branches.
    pub fn accumulate_pure(&mut self, weight: f64, state: &StateVector) {
        assert_eq!(
            state.num_qubits(),
            self.num_qubits,
            "branch state size mismatch"
        );
        let dim = self.dim();
        let amps = state.amplitudes();
        for r in 0..dim {
            for c in 0..dim {
                self.entries[r * dim + c] += weight * amps[r] * amps[c].conj();
            }
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim() + c]
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let dim = self.dim();
        self.entries[r * dim + c] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    /// Max-norm of ρ − ρ†.
    pub fn hermiticity_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Real eigenvalues of the Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim(), |r, c| self.get(r, c))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// ½‖a − b‖₁ via the eigenvalues of the Hermitian difference.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                a: self.dim(),
                b: other.dim(),
            });
        }
        let dim = self.dim();
        let evs = hermitian_eigenvalues(dim, |r, c| self.get(r, c) - other.get(r, c));
        Ok(0.5 * evs.iter().map(|e| e.abs()).sum::<f64>())
    }

    /// Reduced density matrix on `keep` (ascending qubit order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for &q in &keep {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        let k = keep.len();
        let env: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
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
        let mut out = DensityMatrix::zeros(k)?;
        let dim_k = 1usize << k;
        let dim_e = 1usize << env.len();
        for r in 0..dim_k {
            for c in 0..dim_k {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..dim_e {
                    acc += self.get(compose(r, e), compose(c, e));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// tr(ρ · w·P).
    pub fn expectation(&self, obs: &PauliString) -> Result<f64> {
        if obs.len() != self.num_qubits {
            return Err(Error::PauliLengthMismatch {
                expected: self.num_qubits,
                got: obs.len(),
            });
        }
        let xm = obs.x_mask();
        let dim = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        // tr(ρP) = Σ_col ⟨col| ρ P |col⟩; P|col⟩ = coeff(col) |col ^ xm⟩
        for col in 0..dim {
            acc += obs.basis_coeff(col) * self.get(col, col ^ xm);
        }
        Ok(acc.re * obs.weight())
    }
}

/// Eigenvalues of a Hermitian matrix given entrywise, ascending.
pub fn hermitian_eigenvalues(dim: usize, entry: impl Fn(usize, usize) -> Complex64) -> Vec<f64> {
    let m = DMatrix::from_fn(dim, dim, |r, c| entry(r, c));
    let mut evs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::gate::GateMatrix;

    #[test]
    fn trace_distance_identical_is_zero() {
        let mut st = StateVector::new(2).unwrap();
        st.apply_gate(&GateMatrix::ry(0.4), &[0]).unwrap();
        let rho = DensityMatrix::from_pure(&st);
        assert!(rho.trace_distance(&rho).unwrap() < 1e-14);
    }

    #[test]
    fn trace_distance_orthogonal_pures_is_one() {
        let zero = StateVector::new(1).unwrap();
        let mut one = StateVector::new(1).unwrap();
        one.apply_gate(&GateMatrix::x(), &[0]).unwrap();
        let d = DensityMatrix::from_pure(&zero)
            .trace_distance(&DensityMatrix::from_pure(&one))
            .unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_mixed_to_zero_projector_is_half() {
        let mm = DensityMatrix::maximally_mixed(1).unwrap();
        let zero = DensityMatrix::from_pure(&StateVector::new(1).unwrap());
        let d = mm.trace_distance(&zero).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = DensityMatrix::maximally_mixed(1).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            a.trace_distance(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_partial_trace_matches_statevector_route() {
        let mut rng = crate::rng::stream_rng(14, 0);
        for _ in 0..20 {
            let st = crate::random::random_state(3, &mut rng);
            let via_state = st.partial_trace(&[1]).unwrap();
            let via_density = DensityMatrix::from_pure(&st).partial_trace(&[1]).unwrap();
            assert!(via_state.trace_distance(&via_density).unwrap() < 1e-12);
        }
    }

    #[test]
    fn expectation_matches_pure_route() {
        let mut rng = crate::rng::stream_rng(15, 0);
        for _ in 0..30 {
            let st = crate::random::random_state(2, &mut rng);
            let obs = crate::random::random_pauli_string(2, &mut rng);
            let a = st.expectation(&obs).unwrap();
            let b = DensityMatrix::from_pure(&st).expectation(&obs).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
