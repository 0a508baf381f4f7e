//! Gate set, durations and the plain-text gate-list dump.
//!
//! Durations are in single-qubit gate times: one-qubit gates take 1, two-qubit
//! gates take 2 and a measurement event takes 10. Multi-controlled gates have no
//! duration; they exist only before decomposition.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const SINGLE_QUBIT_TIME: u64 = 1;
pub const TWO_QUBIT_TIME: u64 = 2;
pub const MEASUREMENT_TIME: u64 = 10;

/// Row-major 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Mat2(pub [C64; 4]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self([a, b, c, d])
    }

    pub fn identity() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Self([o, z, z, o])
    }

    pub fn pauli_x() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Self([z, o, o, z])
    }

    pub fn pauli_z() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Self([o, z, z, -o])
    }

    pub fn hadamard() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self([h, h, h, -h])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn adjoint(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn det(&self) -> C64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Principal square root of a 2x2 unitary.
    ///
    /// Uses `sqrt(U) = (U + s I) / sqrt(tr U + 2 s)` with `s = ±sqrt(det U)`,
    /// which holds for any 2x2 matrix by Cayley-Hamilton.
    pub fn sqrt_unitary(&self) -> Mat2 {
        let tr = self.0[0] + self.0[3];
        let s0 = self.det().sqrt();
        let s = if (tr + 2.0 * s0).norm() > 1e-9 { s0 } else { -s0 };
        let t = (tr + 2.0 * s).sqrt();
        let [a, b, c, d] = self.0;
        Mat2([(a + s) / t, b / t, c / t, (d + s) / t])
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.adjoint()).max_abs_diff(&Mat2::identity()) <= tol
    }
}

/// One gate of a circuit. Qubit numbers are global state indices.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Swap(usize, usize),
    /// Controlled single-qubit unitary, produced by decomposition.
    Cu { control: usize, target: usize, u: Mat2 },
    /// X on `target` when every control is `|1⟩`.
    Mcx { controls: Vec<usize>, target: usize },
    /// Phase `-1` when every listed qubit is `|1⟩`.
    Mcz { controls: Vec<usize>, target: usize },
}

impl Gate {
    /// Multi-controlled X, reduced to `X`/`CNOT` for zero or one control.
    pub fn mcx(controls: &[usize], target: usize) -> Gate {
        match controls {
            [] => Gate::X(target),
            [c] => Gate::Cnot { control: *c, target },
            _ => Gate::Mcx { controls: controls.to_vec(), target },
        }
    }

    /// Multi-controlled Z, reduced to `Z`/`CZ` for zero or one control.
    pub fn mcz(controls: &[usize], target: usize) -> Gate {
        match controls {
            [] => Gate::Z(target),
            [c] => Gate::Cz(*c, target),
            _ => Gate::Mcz { controls: controls.to_vec(), target },
        }
    }

    /// Controlled `u`, reduced to `CNOT`/`CZ` when `u` is exactly X or Z.
    pub fn cu(control: usize, target: usize, u: Mat2) -> Gate {
        if u.max_abs_diff(&Mat2::pauli_x()) == 0.0 {
            Gate::Cnot { control, target }
        } else if u.max_abs_diff(&Mat2::pauli_z()) == 0.0 {
            Gate::Cz(control, target)
        } else {
            Gate::Cu { control, target, u }
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::H(q) | Gate::Z(q) => vec![*q],
            Gate::Cnot { control, target } | Gate::Cu { control, target, .. } => vec![*control, *target],
            Gate::Cz(a, b) | Gate::Swap(a, b) => vec![*a, *b],
            Gate::Mcx { controls, target } | Gate::Mcz { controls, target } => {
                let mut q = controls.clone();
                q.push(*target);
                q
            }
        }
    }

    pub fn support_mask(&self) -> u64 {
        self.qubits().iter().fold(0, |m, &q| m | (1 << q))
    }

    pub fn is_multi_controlled(&self) -> bool {
        matches!(self, Gate::Mcx { .. } | Gate::Mcz { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::H(_) => "H",
            Gate::Z(_) => "Z",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::Cu { .. } => "CU",
            Gate::Mcx { .. } => "MCX",
            Gate::Mcz { .. } => "MCZ",
        }
    }

    /// Every gate except `Cu` is self-inverse.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Cu { control, target, u } => Gate::Cu { control: *control, target: *target, u: u.adjoint() },
            g => g.clone(),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(Error::RepeatedQubit(self.to_string()));
            }
        }
        Ok(())
    }
}

/// Duration of a decomposed gate.
pub fn gate_duration(gate: &Gate) -> Result<u64> {
    match gate {
        Gate::X(_) | Gate::H(_) | Gate::Z(_) => Ok(SINGLE_QUBIT_TIME),
        Gate::Cnot { .. } | Gate::Cz(..) | Gate::Swap(..) | Gate::Cu { .. } => Ok(TWO_QUBIT_TIME),
        Gate::Mcx { .. } | Gate::Mcz { .. } => Err(Error::Undecomposed(gate.to_string())),
    }
}

/// Duration of one measurement event, whatever the number of measured qubits.
pub fn measurement_duration() -> u64 {
    MEASUREMENT_TIME
}

/// Inverse circuit: reversed order, each gate inverted.
pub fn inverse_circuit(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}

fn join(qs: &[usize]) -> String {
    if qs.is_empty() {
        return "-".to_string();
    }
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

/// Formats as `KIND controls targets`, with `-` for an empty control list.
/// `CU` lines append the eight real matrix entries.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (controls, targets): (Vec<usize>, Vec<usize>) = match self {
            Gate::X(q) | Gate::H(q) | Gate::Z(q) => (vec![], vec![*q]),
            Gate::Cnot { control, target } | Gate::Cu { control, target, .. } => (vec![*control], vec![*target]),
            Gate::Cz(a, b) => (vec![*a], vec![*b]),
            Gate::Swap(a, b) => (vec![], vec![*a, *b]),
            Gate::Mcx { controls, target } | Gate::Mcz { controls, target } => (controls.clone(), vec![*target]),
        };
        write!(f, "{} {} {}", self.name(), join(&controls), join(&targets))?;
        if let Gate::Cu { u, .. } = self {
            for z in u.0 {
                write!(f, " {:.17e} {:.17e}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

/// One gate per line, in the [`Gate`] display format.
pub fn dump_gate_list(gates: &[Gate]) -> String {
    let mut out = String::new();
    for g in gates {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn durations() {
        assert_eq!(gate_duration(&Gate::H(0)).unwrap(), 1);
        assert_eq!(gate_duration(&Gate::Cnot { control: 0, target: 1 }).unwrap(), 2);
        assert_eq!(measurement_duration(), 10);
        let mcx = Gate::mcx(&[0, 1], 2);
        assert!(matches!(gate_duration(&mcx), Err(Error::Undecomposed(_))));
    }

    #[test]
    fn constructors_reduce_small_controls() {
        assert_eq!(Gate::mcx(&[], 3), Gate::X(3));
        assert_eq!(Gate::mcx(&[1], 3), Gate::Cnot { control: 1, target: 3 });
        assert_eq!(Gate::mcz(&[1], 3), Gate::Cz(1, 3));
        assert_eq!(Gate::cu(0, 1, Mat2::pauli_x()), Gate::Cnot { control: 0, target: 1 });
    }

    #[test]
    fn sqrt_of_x_and_z() {
        for u in [Mat2::pauli_x(), Mat2::pauli_z(), Mat2::hadamard()] {
            let r = u.sqrt_unitary();
            assert!(r.is_unitary(1e-12));
            assert!(r.mul(&r).max_abs_diff(&u) < 1e-12);
        }
        let root = Mat2::pauli_x().sqrt_unitary().sqrt_unitary();
        assert!(root.mul(&root).mul(&root).mul(&root).max_abs_diff(&Mat2::pauli_x()) < 1e-12);
    }

    #[test]
    fn display_format() {
        assert_eq!(Gate::mcx(&[0, 2], 5).to_string(), "MCX 0,2 5");
        assert_eq!(Gate::H(4).to_string(), "H - 4");
        assert_eq!(Gate::Swap(1, 2).to_string(), "SWAP - 1,2");
    }

    #[test]
    fn validation() {
        assert!(Gate::Cz(1, 1).validate(3).is_err());
        assert!(Gate::X(3).validate(3).is_err());
        assert!(Gate::mcx(&[0, 1], 2).validate(3).is_ok());
    }
}
