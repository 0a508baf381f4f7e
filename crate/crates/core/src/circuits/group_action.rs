//! Group-action operators `Ĝ: |x⟩|v⟩ ↦ |x⟩|g(x)·v⟩`.
//!
//! `Ĝ` is a product of blocks `ĝ^(2^i)` controlled on group qubit `x_i`.
//! For `AddModN` the block adds `2^i`, i.e. increments bits `i..n` only.
//! Spin translations permute position qubits, so their powers are cycles of
//! controlled swaps. Any other generator is compiled from its permutation of
//! labels with Gray-code transposition chains.

use super::{Builder, CircuitBlock};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::groups::{GroupKind, GroupSpec, Permutation};
use crate::layout::{Register, RegisterLayout};

pub fn build_group_action(spec: &GroupSpec, layout: &RegisterLayout, inverse: bool) -> Result<CircuitBlock> {
    if spec.index_bits() as usize != layout.group_bits || spec.position_bits() as usize != layout.position_bits {
        return Err(Error::Unsupported(format!(
            "group needs {} index and {} position bits, layout has {} and {}",
            spec.index_bits(),
            spec.position_bits(),
            layout.group_bits,
            layout.position_bits
        )));
    }
    let group = layout.group();
    let pos = layout.position1();
    let anc = layout.ancilla();
    let mut b = Builder::new(&anc.qubits());
    match spec.kind() {
        GroupKind::AddModN { .. } => {
            for i in 0..group.len {
                push_add_power(&mut b, group.qubit(i), pos, anc, i);
            }
        }
        GroupKind::SpinTranslation { sites } => {
            for i in 0..group.len {
                let shift = (1u64 << i) % *sites as u64;
                push_controlled_rotation(&mut b, group.qubit(i), pos, shift as usize);
            }
        }
        GroupKind::SingleCycleAbelian { generator } => {
            for i in 0..group.len {
                push_controlled_permutation(&mut b, &[(group.qubit(i), true)], pos, &generator.pow(1 << i));
            }
        }
        GroupKind::TwoGeneratorComposite { g1, g2 } => {
            let m1 = g1.order().trailing_zeros() as usize;
            let m2 = g2.order().trailing_zeros() as usize;
            let order = group.qubit(m1 + m2);
            // order 0: g1 powers then g2 powers; order 1: g2 powers then g1 powers
            for i in 0..m1 {
                push_controlled_permutation(&mut b, &[(group.qubit(i), true), (order, false)], pos, &g1.pow(1 << i));
            }
            for i in 0..m2 {
                push_controlled_permutation(&mut b, &[(group.qubit(m1 + i), true)], pos, &g2.pow(1 << i));
            }
            for i in 0..m1 {
                push_controlled_permutation(&mut b, &[(group.qubit(i), true), (order, true)], pos, &g1.pow(1 << i));
            }
        }
    }
    let used = if matches!(spec.kind(), GroupKind::AddModN { .. }) {
        anc.len.min(pos.len.saturating_sub(1))
    } else {
        0
    };
    let block = b.finish("G", used);
    Ok(if inverse { block.inverse().renamed("G^-1") } else { block })
}

/// Controlled `+2^i` on `pos`: a controlled incrementer on bits `i..n`.
///
/// Carries `C_j = x_i ∧ v_i ∧ … ∧ v_{j-1}` are kept in ancilla where
/// available (`anc[k]` holds `C_{i+1+k}`). Targets are flipped from the top
/// bit down, and each stored carry is uncomputed right after its bit flips.
fn push_add_power(b: &mut Builder, control: usize, pos: Register, anc: Register, i: usize) {
    let n = pos.len;
    let stored = anc.len.min(n.saturating_sub(i + 1));
    let carry_src = |k: usize| if k == 0 { control } else { anc.qubit(k - 1) };
    for k in 0..stored {
        b.acquire(anc.qubit(k));
        b.push(Gate::mcx(&[carry_src(k), pos.qubit(i + k)], anc.qubit(k)));
    }
    for j in (i..n).rev() {
        let k = j - i;
        if k == 0 {
            b.push(Gate::Cnot { control, target: pos.qubit(i) });
        } else if k <= stored {
            b.push(Gate::Cnot { control: anc.qubit(k - 1), target: pos.qubit(j) });
            b.push(Gate::mcx(&[carry_src(k - 1), pos.qubit(j - 1)], anc.qubit(k - 1)));
            b.release(anc.qubit(k - 1));
        } else {
            let mut controls = vec![carry_src(stored)];
            controls.extend((i + stored..j).map(|l| pos.qubit(l)));
            b.push(Gate::mcx(&controls, pos.qubit(j)));
        }
    }
}

/// The controlled `ĝ^(2^i)` block of the `AddModN` operator on its own,
/// for checking the power simplification against repeated increments.
pub fn add_mod_power_block(layout: &RegisterLayout, i: usize) -> CircuitBlock {
    let anc = layout.ancilla();
    let mut b = Builder::new(&anc.qubits());
    push_add_power(&mut b, layout.group().qubit(i), layout.position1(), anc, i);
    b.finish(format!("g^{}", 1u64 << i), anc.len)
}

/// Controlled rotation of `pos` by `shift` sites toward the least-significant
/// bit: qubit `j` receives the value of qubit `j + shift (mod n)`.
fn push_controlled_rotation(b: &mut Builder, control: usize, pos: Register, shift: usize) {
    let n = pos.len;
    if shift == 0 {
        return;
    }
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut j = (start + shift) % n;
        while j != start {
            seen[j] = true;
            cycle.push(j);
            j = (j + shift) % n;
        }
        for w in cycle.windows(2) {
            push_fredkin(b, control, pos.qubit(w[0]), pos.qubit(w[1]));
        }
    }
}

fn push_fredkin(b: &mut Builder, c: usize, p: usize, q: usize) {
    b.push(Gate::Cnot { control: q, target: p });
    b.push(Gate::mcx(&[c, p], q));
    b.push(Gate::Cnot { control: q, target: p });
}

/// Applies the label permutation `perm` to `pos` when every control matches
/// its polarity (`true` = control on `|1⟩`).
fn push_controlled_permutation(b: &mut Builder, controls: &[(usize, bool)], pos: Register, perm: &Permutation) {
    for cycle in perm.cycles() {
        // c0 -> c1 -> … -> c0 as a product of transpositions, last pair first.
        for w in cycle.windows(2).rev() {
            push_transposition(b, controls, pos, w[0], w[1]);
        }
    }
}

/// Exchanges basis labels `u` and `w` via a Gray-code path between them.
fn push_transposition(b: &mut Builder, controls: &[(usize, bool)], pos: Register, u: u64, w: u64) {
    let diff = u ^ w;
    let mut path = vec![u];
    let mut cur = u;
    for bit in 0..pos.len {
        if diff >> bit & 1 == 1 {
            cur ^= 1 << bit;
            path.push(cur);
        }
    }
    let steps: Vec<(u64, usize)> = path.windows(2).map(|p| (p[0], (p[0] ^ p[1]).trailing_zeros() as usize)).collect();
    let d = steps.len();
    let order = (0..d).chain((0..d - 1).rev());
    for s in order {
        let (from, bit) = steps[s];
        let mut cs: Vec<(usize, bool)> = controls.to_vec();
        for l in 0..pos.len {
            if l != bit {
                cs.push((pos.qubit(l), from >> l & 1 == 1));
            }
        }
        push_polarized_mcx(b, &cs, pos.qubit(bit));
    }
}

fn push_polarized_mcx(b: &mut Builder, controls: &[(usize, bool)], target: usize) {
    let negated: Vec<usize> = controls.iter().filter(|(_, p)| !p).map(|(q, _)| *q).collect();
    for &q in &negated {
        b.push(Gate::X(q));
    }
    let qs: Vec<usize> = controls.iter().map(|(q, _)| *q).collect();
    b.push(Gate::mcx(&qs, target));
    for &q in &negated {
        b.push(Gate::X(q));
    }
}
