//! Unitary gate matrices for one and two qubits.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::statevec::TOL_ALGEBRAIC;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A validated unitary on one or two qubits.
///
/// Two-qubit matrices index their 2-bit basis little-endian in target order:
/// when applied with targets `[a, b]`, bit 0 of the gate basis is qubit `a`
/// and bit 1 is qubit `b`.
#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    Single([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl GateMatrix {
    /// Validates unitarity (max |U†U − I| below 1e-12) of a one-qubit matrix.
    pub fn single(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let g = GateMatrix::Single(m);
        g.check_unitary()?;
        Ok(g)
    }

    /// Validates unitarity of a two-qubit matrix.
    pub fn two(m: [[Complex64; 4]; 4]) -> Result<Self> {
        let g = GateMatrix::Two(m);
        g.check_unitary()?;
        Ok(g)
    }

    pub fn arity(&self) -> usize {
        match self {
            GateMatrix::Single(_) => 1,
            GateMatrix::Two(_) => 2,
        }
    }

    pub fn as_single(&self) -> Option<&[[Complex64; 2]; 2]> {
        match self {
            GateMatrix::Single(m) => Some(m),
            GateMatrix::Two(_) => None,
        }
    }

    pub fn as_two(&self) -> Option<&[[Complex64; 4]; 4]> {
        match self {
            GateMatrix::Single(_) => None,
            GateMatrix::Two(m) => Some(m),
        }
    }

    fn check_unitary(&self) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > TOL_ALGEBRAIC {
            return Err(Error::NonUnitary { residual });
        }
        Ok(())
    }

    /// Max-norm of U†U − I.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = c(0.0, 0.0);
                for k in 0..n {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                let target = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    pub fn dim(&self) -> usize {
        match self {
            GateMatrix::Single(_) => 2,
            GateMatrix::Two(_) => 4,
        }
    }

    pub fn entry(&self, r: usize, col: usize) -> Complex64 {
        match self {
            GateMatrix::Single(m) => m[r][col],
            GateMatrix::Two(m) => m[r][col],
        }
    }

    /// Matrix product `self * rhs` (same arity).
    pub fn mul(&self, rhs: &GateMatrix) -> GateMatrix {
        assert_eq!(self.arity(), rhs.arity(), "gate arity mismatch in product");
        match (self, rhs) {
            (GateMatrix::Single(a), GateMatrix::Single(b)) => {
                let mut m = [[c(0.0, 0.0); 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            m[i][j] += a[i][k] * b[k][j];
                        }
                    }
                }
                GateMatrix::Single(m)
            }
            (GateMatrix::Two(a), GateMatrix::Two(b)) => {
                let mut m = [[c(0.0, 0.0); 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        for k in 0..4 {
                            m[i][j] += a[i][k] * b[k][j];
                        }
                    }
                }
                GateMatrix::Two(m)
            }
            _ => unreachable!(),
        }
    }

    pub fn adjoint(&self) -> GateMatrix {
        match self {
            GateMatrix::Single(m) => {
                let mut a = [[c(0.0, 0.0); 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        a[i][j] = m[j][i].conj();
                    }
                }
                GateMatrix::Single(a)
            }
            GateMatrix::Two(m) => {
                let mut a = [[c(0.0, 0.0); 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        a[i][j] = m[j][i].conj();
                    }
                }
                GateMatrix::Two(a)
            }
        }
    }

    /// True when `self = e^{iφ} other` for some global phase φ.
    pub fn approx_eq_up_to_phase(&self, other: &GateMatrix, tol: f64) -> bool {
        if self.arity() != other.arity() {
            return false;
        }
        let n = self.dim();
        // phase from the largest entry of `other`
        let mut best = (0usize, 0usize);
        let mut mag = 0.0;
        for i in 0..n {
            for j in 0..n {
                let m = other.entry(i, j).norm();
                if m > mag {
                    mag = m;
                    best = (i, j);
                }
            }
        }
        if mag < tol {
            return false;
        }
        let phase = self.entry(best.0, best.1) / other.entry(best.0, best.1);
        if (phase.norm() - 1.0).abs() > 1e-6 {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                if (self.entry(i, j) - phase * other.entry(i, j)).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    // -- standard gates -------------------------------------------------

    pub fn identity() -> Self {
        GateMatrix::Single([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]])
    }

    pub fn h() -> Self {
        let s = FRAC_1_SQRT_2;
        GateMatrix::Single([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]])
    }

    pub fn x() -> Self {
        GateMatrix::Single([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn y() -> Self {
        GateMatrix::Single([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn z() -> Self {
        GateMatrix::Single([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
    }

    pub fn s() -> Self {
        GateMatrix::Single([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
    }

    pub fn s_dag() -> Self {
        GateMatrix::Single([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]])
    }

    /// R_z(θ) = diag(e^{−iθ/2}, e^{+iθ/2}).
    pub fn rz(theta: f64) -> Self {
        GateMatrix::Single([
            [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
        ])
    }

    /// R_x(θ) = cos(θ/2) I − i sin(θ/2) X.
    pub fn rx(theta: f64) -> Self {
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        GateMatrix::Single([[c(ch, 0.0), c(0.0, -sh)], [c(0.0, -sh), c(ch, 0.0)]])
    }

    /// R_y(θ) = cos(θ/2) I − i sin(θ/2) Y.
    pub fn ry(theta: f64) -> Self {
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        GateMatrix::Single([[c(ch, 0.0), c(-sh, 0.0)], [c(sh, 0.0), c(ch, 0.0)]])
    }

    /// diag(1, e^{iα}) — a phase on |1⟩.
    pub fn phase(alpha: f64) -> Self {
        GateMatrix::Single([
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, alpha)],
        ])
    }

    /// J(β) = H·R_z(β), the composite gate teleported by one ancilla round.
    pub fn j(beta: f64) -> Self {
        GateMatrix::h().mul(&GateMatrix::rz(beta))
    }

    pub fn cz() -> Self {
        let mut m = [[c(0.0, 0.0); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = if i == 3 { c(-1.0, 0.0) } else { c(1.0, 0.0) };
        }
        GateMatrix::Two(m)
    }

    /// Controlled version of a one-qubit gate. Applied with targets
    /// `[control, target]`: the control is the low bit of the gate basis.
    pub fn controlled(u: &GateMatrix) -> Self {
        let u = u
            .as_single()
            .expect("controlled() takes a one-qubit gate");
        let mut m = [[c(0.0, 0.0); 4]; 4];
        // basis index = control_bit + 2*target_bit
        for t in 0..2 {
            m[2 * t][2 * t] = c(1.0, 0.0); // control 0: identity
        }
        for t_out in 0..2 {
            for t_in in 0..2 {
                m[1 + 2 * t_out][1 + 2 * t_in] = u[t_out][t_in];
            }
        }
        GateMatrix::Two(m)
    }

    /// Controlled-R_z(θ): diag(1, 1, e^{−iθ/2}, e^{+iθ/2}) on (control, target).
    pub fn controlled_rz(theta: f64) -> Self {
        GateMatrix::controlled(&GateMatrix::rz(theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn named_gates_are_unitary() {
        for g in [
            GateMatrix::identity(),
            GateMatrix::h(),
            GateMatrix::x(),
            GateMatrix::y(),
            GateMatrix::z(),
            GateMatrix::s(),
            GateMatrix::s_dag(),
            GateMatrix::rz(0.3),
            GateMatrix::rx(-1.1),
            GateMatrix::ry(2.7),
            GateMatrix::phase(0.9),
            GateMatrix::cz(),
            GateMatrix::controlled(&GateMatrix::x()),
            GateMatrix::controlled_rz(0.7),
        ] {
            assert!(g.unitarity_residual() < TOL_ALGEBRAIC);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let bad = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(matches!(
            GateMatrix::single(bad),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn rz_rx_rz_quarter_turns_make_hadamard() {
        // R_z(π/2) R_x(π/2) R_z(π/2) = e^{−iπ/2} H, the 2×2 product oracle.
        let prod = GateMatrix::rz(FRAC_PI_2)
            .mul(&GateMatrix::rx(FRAC_PI_2))
            .mul(&GateMatrix::rz(FRAC_PI_2));
        assert!(prod.approx_eq_up_to_phase(&GateMatrix::h(), 1e-12));
        // and the phase is exactly −i
        let phase = prod.entry(0, 0) / GateMatrix::h().entry(0, 0);
        assert!((phase - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn controlled_gate_layout() {
        // control = gate bit 0, target = gate bit 1
        let cx = GateMatrix::controlled(&GateMatrix::x());
        // |c=1,t=0⟩ (index 1) -> |c=1,t=1⟩ (index 3)
        assert!((cx.entry(3, 1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((cx.entry(1, 3) - c(1.0, 0.0)).norm() < 1e-15);
        // |c=0,t⟩ untouched
        assert!((cx.entry(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((cx.entry(2, 2) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn j_gate_composition() {
        // J(β)J(γ)J(δ) spans single-qubit rotations; at zero angles it is H·H·H = H.
        let j0 = GateMatrix::j(0.0);
        let prod = j0.mul(&j0).mul(&j0);
        assert!(prod.approx_eq_up_to_phase(&GateMatrix::h(), 1e-12));
    }
}
