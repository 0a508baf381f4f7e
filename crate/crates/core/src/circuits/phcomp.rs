//! Phase comparator: `|a⟩|b⟩ ↦ -|a⟩|b⟩` when `a < b`.
//!
//! After negating `a`, the comparison is swept from the most significant bit.
//! At bit `i` a phase is applied on `ā_i b_i` provided every higher bit pair
//! was equal; that equality ("continue") bit is then written onto `b_i` by
//! `CNOT(ā_i → b_i)`. With ancilla, runs of continue bits are folded into
//! ancilla by a Toffoli chain so the phase gates stay small.

use super::{Builder, CircuitBlock};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::layout::{max_ancilla, Register};

pub fn build_phcomp(a: Register, b: Register, ancilla: Register) -> Result<CircuitBlock> {
    let n = a.len;
    if b.len != n || n == 0 {
        return Err(Error::InvalidConfig("comparator registers must have equal non-zero width".into()));
    }
    let max = max_ancilla(n);
    if ancilla.len > max {
        return Err(Error::AncillaOutOfRange { count: ancilla.len, max });
    }
    let anc = ancilla.qubits();
    let mut bld = Builder::new(&anc);
    let mut compute: Vec<Gate> = Vec::new();
    // anc[k] holds the AND of continue bits j >= n - 2 - k
    let mut chained = 0usize;

    for q in a.qubits() {
        bld.push(Gate::X(q));
    }
    for i in (0..n).rev() {
        let mut controls = vec![a.qubit(i), b.qubit(i)];
        let mut upper = n;
        if chained > 0 {
            controls.push(anc[chained - 1]);
            upper = n - 1 - chained;
        }
        controls.extend((i + 1..upper).map(|j| b.qubit(j)));
        let (t, c) = controls.split_last().expect("non-empty");
        bld.push(Gate::mcz(c, *t));
        if i == 0 {
            break;
        }
        let cn = Gate::Cnot { control: a.qubit(i), target: b.qubit(i) };
        bld.push(cn.clone());
        compute.push(cn);
        if i + 2 <= n && n - 2 - i == chained && chained < anc.len() {
            let prev = if chained == 0 { b.qubit(n - 1) } else { anc[chained - 1] };
            let t = Gate::mcx(&[prev, b.qubit(i)], anc[chained]);
            bld.acquire(anc[chained]);
            bld.push(t.clone());
            compute.push(t);
            chained += 1;
        }
    }
    for g in compute.iter().rev() {
        bld.push(g.clone());
        if let Gate::Mcx { target, .. } = g {
            bld.release(*target);
        }
    }
    for q in a.qubits() {
        bld.push(Gate::X(q));
    }
    Ok(bld.finish("PhComp", ancilla.len))
}
