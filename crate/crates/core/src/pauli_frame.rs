//! Client-private byproduct bookkeeping.
//!
//! Measurement-driven gates leave a Pauli X^x Z^z on each register qubit. The
//! client records the exponents here, pushes them through the server's fixed
//! Clifford gates, and flips reported measurement signs instead of ever
//! touching the server's state. Phases are deliberately dropped: only the
//! sign of a measured Pauli observable is observable, and global phase is
//! untracked throughout the crate.
//!
//! The frame never leaves the client: it is not serialisable and no channel
//! message type can carry it.

use std::fmt;

use crate::error::{Error, Result};
use crate::statevec::{GateMatrix, Pauli, PauliString, StateVector};

/// The server's fixed gate alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServerGate {
    H(usize),
    S(usize),
    Cz(usize, usize),
}

impl ServerGate {
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            ServerGate::H(q) | ServerGate::S(q) => vec![q],
            ServerGate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        match self {
            ServerGate::H(_) => GateMatrix::h(),
            ServerGate::S(_) => GateMatrix::s(),
            ServerGate::Cz(_, _) => GateMatrix::cz(),
        }
    }

    /// Applies the gate to a (possibly larger) state.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.apply_gate(&self.matrix(), &self.targets())
    }
}

impl fmt::Display for ServerGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ServerGate::H(q) => write!(f, "H q{q}"),
            ServerGate::S(q) => write!(f, "S q{q}"),
            ServerGate::Cz(a, b) => write!(f, "CZ q{a} q{b}"),
        }
    }
}

/// Per-register-qubit X/Z exponent pair (phase untracked).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliFrame {
    /// Identity frame over `num_qubits` register qubits.
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            x: vec![false; num_qubits],
            z: vec![false; num_qubits],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn exponents(&self, qubit: usize) -> (bool, bool) {
        (self.x[qubit], self.z[qubit])
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&b| !b) && self.z.iter().all(|&b| !b)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.x.len() {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.x.len(),
            });
        }
        Ok(())
    }

    /// Folds a fresh byproduct X^x Z^z on `qubit` into the frame (mod 2).
    pub fn absorb_byproduct(&mut self, qubit: usize, x: bool, z: bool) -> Result<()> {
        self.check_qubit(qubit)?;
        self.x[qubit] ^= x;
        self.z[qubit] ^= z;
        Ok(())
    }

    /// Replaces the frame P with P′ ∝ G P G† for a server gate G.
    ///
    /// Rules: H swaps x↔z; S maps (x, z) → (x, z⊕x); CZ adds each side's x
    /// into the partner's z.
    pub fn conjugate_through_clifford(&mut self, gate: &ServerGate) -> Result<()> {
        match *gate {
            ServerGate::H(q) => {
                self.check_qubit(q)?;
                let x = self.x[q];
                self.x[q] = self.z[q];
                self.z[q] = x;
                Ok(())
            }
            ServerGate::S(q) => {
                self.check_qubit(q)?;
                self.z[q] ^= self.x[q];
                Ok(())
            }
            ServerGate::Cz(a, b) => {
                self.check_qubit(a)?;
                self.check_qubit(b)?;
                if a == b {
                    return Err(Error::DuplicateTargets);
                }
                self.z[a] ^= self.x[b];
                self.z[b] ^= self.x[a];
                Ok(())
            }
        }
    }

    /// −1 exponent picked up when commuting the frame past `obs`:
    /// true iff the frame Pauli anticommutes with the observable.
    pub fn anticommutes_with(&self, obs: &PauliString) -> Result<bool> {
        if obs.len() != self.num_qubits() {
            return Err(Error::PauliLengthMismatch {
                expected: self.num_qubits(),
                got: obs.len(),
            });
        }
        let mut parity = false;
        for q in 0..self.num_qubits() {
            let (ox, oz) = obs.letter(q).xz();
            parity ^= (self.x[q] & oz) ^ (self.z[q] & ox);
        }
        Ok(parity)
    }

    /// Reinterprets a raw server-reported ±1 eigenvalue: the sign flips iff
    /// the frame anticommutes with the observable.
    pub fn reinterpret_result(&self, obs: &PauliString, raw_eigenvalue: i8) -> Result<i8> {
        debug_assert!(raw_eigenvalue == 1 || raw_eigenvalue == -1);
        Ok(if self.anticommutes_with(obs)? {
            -raw_eigenvalue
        } else {
            raw_eigenvalue
        })
    }

    /// The frame Pauli on one qubit as a 2×2 matrix (phase-free X^x Z^z).
    pub fn pauli_matrix(&self, qubit: usize) -> GateMatrix {
        let (x, z) = (self.x[qubit], self.z[qubit]);
        let mut m = GateMatrix::identity();
        if z {
            m = GateMatrix::z().mul(&m);
        }
        if x {
            m = GateMatrix::x().mul(&m);
        }
        m
    }

    /// P U P† — the angle adaptation the client applies before teleporting a
    /// rotation onto a qubit that carries frame P.
    pub fn conjugated_matrix(&self, qubit: usize, u: &GateMatrix) -> GateMatrix {
        let p = self.pauli_matrix(qubit);
        // X^xZ^z is self-adjoint up to phase; the phase cancels in P U P†.
        p.mul(u).mul(&p.adjoint())
    }

    /// The frame as Pauli letters, for diagnostics and tests.
    pub fn as_letters(&self) -> Vec<Pauli> {
        (0..self.num_qubits())
            .map(|q| Pauli::from_xz(self.x[q], self.z[q]))
            .collect()
    }

    /// Physically applies the frame Pauli to a state (test/audit use only;
    /// the honest client never does this).
    pub fn apply_to_state(&self, state: &mut StateVector) -> Result<()> {
        for q in 0..self.num_qubits() {
            if self.z[q] {
                state.apply_gate(&GateMatrix::z(), &[q])?;
            }
            if self.x[q] {
                state.apply_gate(&GateMatrix::x(), &[q])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::rng::stream_rng;
    use num_complex::Complex64;
    use rand::Rng;

    #[test]
    fn absorbing_twice_cancels() {
        let mut f = PauliFrame::identity(2);
        f.absorb_byproduct(1, true, false).unwrap();
        f.absorb_byproduct(1, true, false).unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn x_then_z_composes_to_y() {
        let mut f = PauliFrame::identity(1);
        f.absorb_byproduct(0, true, false).unwrap();
        f.absorb_byproduct(0, false, true).unwrap();
        assert_eq!(f.exponents(0), (true, true));
        assert_eq!(f.as_letters()[0], Pauli::Y);
    }

    #[test]
    fn three_round_outcomes_one_zero_one_cancel() {
        // byproduct X^{j1+j3} Z^{j2} with (j1,j2,j3) = (1,0,1)
        let mut f = PauliFrame::identity(1);
        let (j1, j2, j3) = (true, false, true);
        f.absorb_byproduct(0, j1 ^ j3, j2).unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let mut f = PauliFrame::identity(1);
        f.absorb_byproduct(0, true, false).unwrap();
        f.conjugate_through_clifford(&ServerGate::H(0)).unwrap();
        assert_eq!(f.as_letters()[0], Pauli::Z);
    }

    #[test]
    fn s_fixes_z() {
        let mut f = PauliFrame::identity(1);
        f.absorb_byproduct(0, false, true).unwrap();
        f.conjugate_through_clifford(&ServerGate::S(0)).unwrap();
        assert_eq!(f.as_letters()[0], Pauli::Z);
    }

    #[test]
    fn cz_spreads_x_to_partner_z() {
        // CZ (X⊗I) CZ = X⊗Z, checked against the 4×4 conjugation oracle
        let mut f = PauliFrame::identity(2);
        f.absorb_byproduct(0, true, false).unwrap();
        f.conjugate_through_clifford(&ServerGate::Cz(0, 1)).unwrap();
        assert_eq!(f.as_letters(), vec![Pauli::X, Pauli::Z]);

        let cz = GateMatrix::cz();
        let x_on_0 = kron2(&GateMatrix::identity(), &GateMatrix::x());
        let conj = mat_mul(&mat_mul(&cz_as_vec(&cz), &x_on_0), &cz_as_vec(&cz));
        let expect = kron2(&GateMatrix::z(), &GateMatrix::x()); // q1 ⊗ q0 order
        assert!(mats_eq_up_to_phase(&conj, &expect));
    }

    #[test]
    fn reinterpret_examples() {
        let mut f = PauliFrame::identity(1);
        f.absorb_byproduct(0, false, true).unwrap(); // frame Z
        assert_eq!(f.reinterpret_result(&"Z".parse().unwrap(), 1).unwrap(), 1);

        let mut f = PauliFrame::identity(1);
        f.absorb_byproduct(0, true, false).unwrap(); // frame X
        assert_eq!(f.reinterpret_result(&"Z".parse().unwrap(), 1).unwrap(), -1);

        let mut f = PauliFrame::identity(2);
        f.absorb_byproduct(0, true, false).unwrap(); // X on qubit 0
        f.absorb_byproduct(1, false, true).unwrap(); // Z on qubit 1
        // obs X⊗X anticommutes on qubit 1 only
        assert_eq!(f.reinterpret_result(&"XX".parse().unwrap(), 1).unwrap(), -1);
    }

    #[test]
    fn reinterpret_rejects_length_mismatch() {
        let f = PauliFrame::identity(2);
        assert!(f.reinterpret_result(&"Z".parse().unwrap(), 1).is_err());
    }

    // --- brute-force conjugation oracles on dense matrices ---------------

    type Mat = Vec<Vec<Complex64>>;

    fn cz_as_vec(g: &GateMatrix) -> Mat {
        (0..4)
            .map(|r| (0..4).map(|c| g.entry(r, c)).collect())
            .collect()
    }

    fn kron2(hi: &GateMatrix, lo: &GateMatrix) -> Mat {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        m[a * 2 + x][b * 2 + y] = hi.entry(a, b) * lo.entry(x, y);
                    }
                }
            }
        }
        m
    }

    fn kron_n(ops: &[GateMatrix]) -> Mat {
        // ops[q] acts on qubit q; index bit q comes from ops[q]
        let n = ops.len();
        let dim = 1usize << n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut v = Complex64::new(1.0, 0.0);
                for (q, op) in ops.iter().enumerate() {
                    v *= op.entry((r >> q) & 1, (c >> q) & 1);
                }
                m[r][c] = v;
            }
        }
        m
    }

    fn mat_mul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    m[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        m
    }

    fn mat_dagger(a: &Mat) -> Mat {
        let n = a.len();
        (0..n)
            .map(|r| (0..n).map(|c| a[c][r].conj()).collect())
            .collect()
    }

    fn mats_eq_up_to_phase(a: &Mat, b: &Mat) -> bool {
        let n = a.len();
        let mut phase = None;
        for r in 0..n {
            for c in 0..n {
                if b[r][c].norm() > 1e-9 {
                    phase = Some(a[r][c] / b[r][c]);
                }
            }
        }
        let phase = match phase {
            Some(p) if (p.norm() - 1.0).abs() < 1e-9 => p,
            _ => return false,
        };
        for r in 0..n {
            for c in 0..n {
                if (a[r][c] - phase * b[r][c]).norm() > 1e-9 {
                    return false;
                }
            }
        }
        true
    }

    fn frame_as_matrix(f: &PauliFrame) -> Mat {
        let ops: Vec<GateMatrix> = (0..f.num_qubits()).map(|q| f.pauli_matrix(q)).collect();
        kron_n(&ops)
    }

    fn server_gate_as_matrix(g: &ServerGate, n: usize) -> Mat {
        match *g {
            ServerGate::H(q) => {
                let mut ops = vec![GateMatrix::identity(); n];
                ops[q] = GateMatrix::h();
                kron_n(&ops)
            }
            ServerGate::S(q) => {
                let mut ops = vec![GateMatrix::identity(); n];
                ops[q] = GateMatrix::s();
                kron_n(&ops)
            }
            ServerGate::Cz(a, b) => {
                let dim = 1usize << n;
                let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
                for (i, row) in m.iter_mut().enumerate() {
                    let sign = if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    row[i] = Complex64::new(sign, 0.0);
                }
                m
            }
        }
    }

    fn random_gate(n: usize, rng: &mut impl Rng) -> ServerGate {
        match rng.random_range(0..3) {
            0 => ServerGate::H(rng.random_range(0..n)),
            1 => ServerGate::S(rng.random_range(0..n)),
            _ => {
                let a = rng.random_range(0..n);
                let mut b = rng.random_range(0..n);
                while b == a {
                    b = rng.random_range(0..n);
                }
                ServerGate::Cz(a, b)
            }
        }
    }

    fn random_frame(n: usize, rng: &mut impl Rng) -> PauliFrame {
        let mut f = PauliFrame::identity(n);
        for q in 0..n {
            f.absorb_byproduct(q, rng.random(), rng.random()).unwrap();
        }
        f
    }

    #[test]
    fn clifford_propagation_matches_matrix_conjugation() {
        let mut rng = stream_rng(21, 0);
        for n in 2..=3usize {
            for _ in 0..60 {
                let mut frame = random_frame(n, &mut rng);
                let mut conj = frame_as_matrix(&frame);
                for _ in 0..rng.random_range(1..8) {
                    let g = random_gate(n, &mut rng);
                    frame.conjugate_through_clifford(&g).unwrap();
                    let gm = server_gate_as_matrix(&g, n);
                    conj = mat_mul(&mat_mul(&gm, &conj), &mat_dagger(&gm));
                }
                assert!(
                    mats_eq_up_to_phase(&frame_as_matrix(&frame), &conj),
                    "tracked frame diverged from brute-force conjugation"
                );
            }
        }
    }

    #[test]
    fn reinterpret_matches_matrix_sign_oracle() {
        let mut rng = stream_rng(22, 0);
        for n in 1..=3usize {
            for _ in 0..80 {
                let frame = random_frame(n, &mut rng);
                let obs = random::random_pauli_string(n, &mut rng);
                // oracle: P† A P = s·A for Pauli A and frame P; read s off one entry
                let p = frame_as_matrix(&frame);
                let a = obs.unweighted().dense_matrix();
                let conj = mat_mul(&mat_mul(&mat_dagger(&p), &a), &p);
                let mut sign = 0i8;
                'outer: for r in 0..a.len() {
                    for c in 0..a.len() {
                        if a[r][c].norm() > 1e-9 {
                            let ratio = conj[r][c] / a[r][c];
                            sign = if (ratio.re - 1.0).abs() < 1e-9 { 1 } else { -1 };
                            break 'outer;
                        }
                    }
                }
                let corrected = frame.reinterpret_result(&obs.unweighted(), 1).unwrap();
                assert_eq!(corrected, sign);
            }
        }
    }

    #[test]
    fn frame_corrected_simulation_equivalence() {
        // byproducts then Cliffords  ==  Cliffords then conjugated byproducts
        let mut rng = stream_rng(23, 0);
        for _ in 0..40 {
            let n = 2 + (rng.random_range(0..2usize));
            let psi = random::random_state(n, &mut rng);
            let frame0 = random_frame(n, &mut rng);
            let gates: Vec<ServerGate> = (0..rng.random_range(1..6))
                .map(|_| random_gate(n, &mut rng))
                .collect();

            let mut a = psi.clone();
            frame0.apply_to_state(&mut a).unwrap();
            for g in &gates {
                g.apply(&mut a).unwrap();
            }

            let mut b = psi.clone();
            let mut frame = frame0.clone();
            for g in &gates {
                g.apply(&mut b).unwrap();
                frame.conjugate_through_clifford(g).unwrap();
            }
            frame.apply_to_state(&mut b).unwrap();

            assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
