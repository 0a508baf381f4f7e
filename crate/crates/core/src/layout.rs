//! Register layout of the Grover-minimization machine.
//!
//! Qubit 0 is the least-significant bit of the state index, and bit `j` of a
//! register's integer value lives on qubit `offset + j`. Registers are packed
//! as `[group | position1 | position2 | ancilla]` from qubit 0 upward.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::ProblemInstance;

/// Default maximum number of simulated qubits.
pub const DEFAULT_QUBIT_CAPACITY: usize = 24;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    pub offset: usize,
    pub len: usize,
}

impl Register {
    pub fn new(offset: usize, len: usize) -> Self {
        Self { offset, len }
    }

    pub fn qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.len);
        self.offset + bit
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.offset..self.offset + self.len).collect()
    }

    pub fn mask(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            (u64::MAX >> (64 - self.len)) << self.offset
        }
    }

    /// Register value held by basis state `index`.
    #[inline]
    pub fn value_in(&self, index: u64) -> u64 {
        (index & self.mask()) >> self.offset
    }

    /// Basis index with this register set to `value` (other bits from `index`).
    #[inline]
    pub fn with_value(&self, index: u64, value: u64) -> u64 {
        (index & !self.mask()) | ((value << self.offset) & self.mask())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub group_bits: usize,
    pub position_bits: usize,
    pub ancilla_bits: usize,
}

impl RegisterLayout {
    pub fn new(group_bits: usize, position_bits: usize, ancilla_bits: usize) -> Result<Self> {
        Self::with_capacity(group_bits, position_bits, ancilla_bits, DEFAULT_QUBIT_CAPACITY)
    }

    pub fn with_capacity(group_bits: usize, position_bits: usize, ancilla_bits: usize, capacity: usize) -> Result<Self> {
        let max = max_ancilla(position_bits);
        if ancilla_bits > max {
            return Err(Error::AncillaOutOfRange { count: ancilla_bits, max });
        }
        if group_bits == 0 || position_bits == 0 {
            return Err(Error::InvalidConfig("registers must be non-empty".into()));
        }
        let layout = Self { group_bits, position_bits, ancilla_bits };
        if layout.total() > capacity {
            return Err(Error::TooManyQubits { requested: layout.total(), capacity });
        }
        Ok(layout)
    }

    pub fn for_instance(instance: &ProblemInstance, ancilla_bits: usize) -> Result<Self> {
        Self::new(instance.group.index_bits() as usize, instance.n_position_bits as usize, ancilla_bits)
    }

    pub fn total(&self) -> usize {
        self.group_bits + 2 * self.position_bits + self.ancilla_bits
    }

    pub fn group(&self) -> Register {
        Register::new(0, self.group_bits)
    }

    pub fn position1(&self) -> Register {
        Register::new(self.group_bits, self.position_bits)
    }

    pub fn position2(&self) -> Register {
        Register::new(self.group_bits + self.position_bits, self.position_bits)
    }

    pub fn ancilla(&self) -> Register {
        Register::new(self.group_bits + 2 * self.position_bits, self.ancilla_bits)
    }

    /// Basis index of `|x⟩|v1⟩|v2⟩|0⟩`.
    pub fn basis_index(&self, x: u64, v1: u64, v2: u64) -> u64 {
        let i = self.group().with_value(0, x);
        let i = self.position1().with_value(i, v1);
        self.position2().with_value(i, v2)
    }
}

/// Largest useful ancilla count for `n`-bit comparators and adders: `n - 2`.
pub fn max_ancilla(position_bits: usize) -> usize {
    position_bits.saturating_sub(2)
}
