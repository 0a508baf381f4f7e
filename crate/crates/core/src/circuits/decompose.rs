//! Multi-controlled gates in terms of CNOT and controlled single-qubit unitaries.
//!
//! Without scratch qubits, `C^k(U)` is built from `V = sqrt(U)`:
//!
//! ```text
//! C^k(U) = CV(c_k, t) · C^{k-1}X(→ c_k) · CV†(c_k, t) · C^{k-1}X(→ c_k) · C^{k-1}V(t)
//! ```
//!
//! which needs `2·3^(k-1) - 1` gates. Clean ancilla shorten this with a
//! Toffoli chain that folds pairs of controls into one scratch qubit.

use crate::gate::{Gate, Mat2};

/// Gate count of the scratch-free construction for `k` controls.
pub fn recursive_gate_count(k: usize) -> usize {
    if k == 0 {
        1
    } else {
        2 * 3usize.pow(k as u32 - 1) - 1
    }
}

/// Breaks `gate` into one- and two-qubit gates. `ancilla` lists qubits known
/// to be `|0⟩`; they are returned to `|0⟩`. Other gates pass through.
pub fn decompose_multicontrolled(gate: &Gate, ancilla: &[usize]) -> Vec<Gate> {
    let mut out = Vec::new();
    match gate {
        Gate::Mcx { controls, target } => controlled_u(controls, *target, Mat2::pauli_x(), ancilla, &mut out),
        Gate::Mcz { controls, target } => controlled_u(controls, *target, Mat2::pauli_z(), ancilla, &mut out),
        g => out.push(g.clone()),
    }
    out
}

fn chain_length(k: usize, available: usize) -> usize {
    (0..=available.min(k - 1))
        .min_by_key(|&j| 10 * j + recursive_gate_count(k - j))
        .unwrap_or(0)
}

fn controlled_u(controls: &[usize], target: usize, u: Mat2, ancilla: &[usize], out: &mut Vec<Gate>) {
    let k = controls.len();
    if k == 1 {
        out.push(Gate::cu(controls[0], target, u));
        return;
    }
    let free: Vec<usize> = ancilla.iter().copied().filter(|q| !controls.contains(q) && *q != target).collect();
    let j = chain_length(k, free.len());
    if j > 0 {
        let mut chain = Vec::with_capacity(2 * j);
        let mut acc = controls[0];
        for (l, &a) in free[..j].iter().enumerate() {
            let before = chain.len();
            controlled_u(&[acc, controls[l + 1]], a, Mat2::pauli_x(), &[], &mut chain);
            out.extend_from_slice(&chain[before..]);
            acc = a;
        }
        let mut rest = vec![acc];
        rest.extend_from_slice(&controls[j + 1..]);
        controlled_u(&rest, target, u, &[], out);
        out.extend(chain.iter().rev().map(Gate::inverse));
        return;
    }
    let v = u.sqrt_unitary();
    let (last, head) = controls.split_last().expect("k >= 2");
    out.push(Gate::cu(*last, target, v));
    controlled_u(head, *last, Mat2::pauli_x(), ancilla, out);
    out.push(Gate::cu(*last, target, v.adjoint()));
    controlled_u(head, *last, Mat2::pauli_x(), ancilla, out);
    controlled_u(head, target, v, ancilla, out);
}
