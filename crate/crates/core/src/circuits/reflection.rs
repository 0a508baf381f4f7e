use super::{Builder, CircuitBlock};
use crate::gate::Gate;

/// `U_s = I - 2|s⟩⟨s|` on `qubits`, with `|s⟩` the uniform superposition:
/// `H^m X^m MCZ X^m H^m`. `ancilla` are clean scratch qubits for decomposition.
pub fn build_us(qubits: &[usize], ancilla: &[usize]) -> CircuitBlock {
    let mut b = Builder::new(ancilla);
    for &q in qubits {
        b.push(Gate::H(q));
    }
    for &q in qubits {
        b.push(Gate::X(q));
    }
    let (last, rest) = qubits.split_last().expect("U_s needs at least one qubit");
    b.push(Gate::mcz(rest, *last));
    for &q in qubits {
        b.push(Gate::X(q));
    }
    for &q in qubits {
        b.push(Gate::H(q));
    }
    b.finish("U_s", 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{apply_gate, QuantumState};
    use num_complex::Complex64 as C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dense_matches_reflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for m in 1..=4usize {
            let qubits: Vec<usize> = (0..m).collect();
            let block = build_us(&qubits, &[]).decomposed();
            let dim = 1u64 << m;
            let s = 1.0 / dim as f64;
            for j in 0..dim {
                let mut st = QuantumState::basis(m, j).unwrap();
                for g in block.gates() {
                    apply_gate(&mut st, g, None, &mut rng).unwrap();
                }
                for (i, a) in st.amplitudes().iter().enumerate() {
                    let expect = if i as u64 == j { 1.0 - 2.0 * s } else { -2.0 * s };
                    assert!((a - C64::new(expect, 0.0)).norm() < 1e-10, "m={m} col {j} row {i}");
                }
            }
        }
    }

    #[test]
    fn two_qubit_counts_grow_with_m() {
        let counts: Vec<usize> = (1..=6)
            .map(|m| build_us(&(0..m).collect::<Vec<_>>(), &[]).cost().two_qubit_count)
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }
}
