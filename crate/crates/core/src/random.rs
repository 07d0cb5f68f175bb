//! Random states, unitaries and observables for tests and audits.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::statevec::{GateMatrix, Pauli, PauliString, StateVector};

/// Haar-random pure state on `n` qubits.
pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let dim = 1usize << n;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::from_amplitudes(amps).expect("gaussian amplitudes normalise")
}

/// Haar-random one-qubit unitary.
pub fn random_single_qubit_unitary(rng: &mut impl Rng) -> GateMatrix {
    let mut a = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    let mut b = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    a /= norm;
    b /= norm;
    let phase = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    GateMatrix::single([[a, -b.conj() * phase], [b, a.conj() * phase]])
        .expect("construction is unitary")
}

/// Uniform Pauli string with a uniform weight in [-2, 2].
pub fn random_pauli_string(n: usize, rng: &mut impl Rng) -> PauliString {
    let letters = (0..n)
        .map(|_| match rng.random_range(0..4) {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        })
        .collect();
    PauliString::with_weight(letters, rng.random_range(-2.0..2.0))
}

/// Uniform angle in (−π, π].
pub fn random_angle(rng: &mut impl Rng) -> f64 {
    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
}
