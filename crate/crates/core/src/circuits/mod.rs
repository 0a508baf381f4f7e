//! Circuit blocks: the reflection `U_s`, the phase comparator, group-action
//! operators, and decomposition of multi-controlled gates.
//!
//! Builders emit high-level gates (multi-controlled gates included). Each
//! gate remembers which ancilla qubits are guaranteed to be `|0⟩` while it
//! runs, so [`CircuitBlock::decomposed`] can use them as clean scratch space.

mod decompose;
mod group_action;
mod phcomp;
mod reflection;

pub use decompose::{decompose_multicontrolled, recursive_gate_count};
pub use group_action::{add_mod_power_block, build_group_action};
pub use phcomp::build_phcomp;
pub use reflection::build_us;

use crate::error::Result;
use crate::gate::Gate;
use crate::schedule::schedule;

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitBlock {
    pub name: String,
    gates: Vec<Gate>,
    /// Per gate: mask of ancilla qubits that are clean and outside its support.
    clean: Vec<u64>,
    ancilla_used: usize,
}

impl CircuitBlock {
    pub fn empty(name: impl Into<String>) -> Self {
        Self { name: name.into(), gates: Vec::new(), clean: Vec::new(), ancilla_used: 0 }
    }

    /// Wraps a plain gate list with no ancilla information.
    pub fn from_gates(name: impl Into<String>, gates: Vec<Gate>) -> Self {
        let clean = vec![0; gates.len()];
        Self { name: name.into(), gates, clean, ancilla_used: 0 }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of ancilla qubits the block itself stores values in.
    pub fn ancilla_used(&self) -> usize {
        self.ancilla_used
    }

    /// Every qubit the block or its decomposition may touch.
    pub fn support_mask(&self) -> u64 {
        self.gates.iter().zip(&self.clean).fold(0, |m, (g, c)| m | g.support_mask() | c)
    }

    pub fn declared_support(&self) -> Vec<usize> {
        let mask = self.support_mask();
        (0..64).filter(|q| mask >> q & 1 == 1).collect()
    }

    pub fn is_decomposed(&self) -> bool {
        !self.gates.iter().any(Gate::is_multi_controlled)
    }

    /// Appends `other` after `self`.
    pub fn then(mut self, other: &CircuitBlock) -> Self {
        self.gates.extend_from_slice(&other.gates);
        self.clean.extend_from_slice(&other.clean);
        self.ancilla_used = self.ancilla_used.max(other.ancilla_used);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Reversed gate order with each gate inverted.
    pub fn inverse(&self) -> Self {
        Self {
            name: format!("{}^-1", self.name),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            clean: self.clean.iter().rev().copied().collect(),
            ancilla_used: self.ancilla_used,
        }
    }

    /// The same block with every multi-controlled gate broken into one- and
    /// two-qubit gates.
    pub fn decomposed(&self) -> Self {
        let mut gates = Vec::new();
        let mut clean = Vec::new();
        for (g, &c) in self.gates.iter().zip(&self.clean) {
            let scratch: Vec<usize> = (0..64).filter(|q| c >> q & 1 == 1).collect();
            for d in decompose_multicontrolled(g, &scratch) {
                gates.push(d);
                clean.push(0);
            }
        }
        Self { name: self.name.clone(), gates, clean, ancilla_used: self.ancilla_used }
    }

    /// Cost of the decomposed block.
    pub fn cost(&self) -> GateCostReport {
        cost_report(&self.decomposed()).expect("decomposed blocks always schedule")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct GateCostReport {
    pub one_qubit_count: usize,
    pub two_qubit_count: usize,
    pub scheduled_duration: u64,
}

/// Exact gate counts and scheduled duration of a decomposed block.
pub fn cost_report(block: &CircuitBlock) -> Result<GateCostReport> {
    let duration = schedule(block.gates())?.total_duration;
    let one = block.gates().iter().filter(|g| g.qubits().len() == 1).count();
    Ok(GateCostReport {
        one_qubit_count: one,
        two_qubit_count: block.len() - one,
        scheduled_duration: duration,
    })
}

/// Emits gates while tracking which ancilla currently hold data.
pub(crate) struct Builder {
    gates: Vec<Gate>,
    clean: Vec<u64>,
    ancilla: u64,
    busy: u64,
}

impl Builder {
    pub(crate) fn new(ancilla: &[usize]) -> Self {
        let ancilla = ancilla.iter().fold(0, |m, &q| m | (1 << q));
        Self { gates: Vec::new(), clean: Vec::new(), ancilla, busy: 0 }
    }

    pub(crate) fn push(&mut self, g: Gate) {
        self.clean.push(self.ancilla & !self.busy & !g.support_mask());
        self.gates.push(g);
    }

    pub(crate) fn acquire(&mut self, q: usize) {
        self.busy |= 1 << q;
    }

    pub(crate) fn release(&mut self, q: usize) {
        self.busy &= !(1 << q);
    }

    pub(crate) fn finish(self, name: impl Into<String>, ancilla_used: usize) -> CircuitBlock {
        debug_assert_eq!(self.busy, 0, "builder left ancilla dirty");
        CircuitBlock { name: name.into(), gates: self.gates, clean: self.clean, ancilla_used }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_reverses_and_keeps_support() {
        let b = CircuitBlock::from_gates("t", vec![Gate::H(0), Gate::mcx(&[0, 1], 2), Gate::X(3)]);
        let inv = b.inverse();
        assert_eq!(inv.gates()[0], Gate::X(3));
        assert_eq!(inv.support_mask(), b.support_mask());
        assert_eq!(b.declared_support(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn cost_of_plain_list() {
        let b = CircuitBlock::from_gates("t", vec![Gate::H(0), Gate::Cnot { control: 0, target: 1 }, Gate::X(2)]);
        let c = cost_report(&b).unwrap();
        assert_eq!((c.one_qubit_count, c.two_qubit_count, c.scheduled_duration), (2, 1, 3));
    }
}
