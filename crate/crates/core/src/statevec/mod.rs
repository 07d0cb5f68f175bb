//! Dense statevector and density-matrix kernel.
//!
//! Conventions, fixed once for the whole crate:
//! - little-endian amplitude layout: qubit 0 is the least significant bit;
//! - register qubits occupy indices `0..N`, the flying ancilla is index `N`;
//! - global phase is never tracked; states compare via fidelity;
//! - algebraic identities hold to 1e-12, eigenvalue-based checks to 1e-10.

mod density;
mod gate;
mod pauli;
mod state;

pub use density::{hermitian_eigenvalues, DensityMatrix};
pub use gate::GateMatrix;
pub use pauli::{Pauli, PauliString};
pub use state::{MeasureBasis, StateVector};

/// Hard cap on dense simulation size.
pub const MAX_QUBITS: usize = 14;

/// Tolerance for algebraic identities.
pub const TOL_ALGEBRAIC: f64 = 1e-12;

/// Tolerance for eigenvalue-based checks.
pub const TOL_EIGEN: f64 = 1e-10;
