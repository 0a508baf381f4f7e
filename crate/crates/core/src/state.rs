//! Dense state-vector engine with mid-circuit measurement and per-gate noise.
//!
//! Every qubit carries the time it was last acted on. In noisy mode a gate
//! first applies a sampled error unitary to each qubit it touches, with the
//! idle time since that qubit's last action; idle qubits therefore accrue
//! their error lazily at the next touch or measurement. Gate start times come
//! from the greedy layering in [`crate::schedule`].

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gate::{gate_duration, Gate, Mat2, MEASUREMENT_TIME};
use crate::layout::DEFAULT_QUBIT_CAPACITY;
use crate::noise::{sample_error_unitary, NoiseParams};
use crate::schedule::Clock;

#[derive(Clone, Debug)]
pub struct QuantumState {
    amps: Vec<C64>,
    num_qubits: usize,
    last_action: Vec<u64>,
    clock: Clock,
}

impl QuantumState {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: u64) -> Result<Self> {
        Self::basis_with_capacity(num_qubits, index, DEFAULT_QUBIT_CAPACITY)
    }

    pub fn basis_with_capacity(num_qubits: usize, index: u64, capacity: usize) -> Result<Self> {
        if num_qubits > capacity || num_qubits > 40 {
            return Err(Error::TooManyQubits { requested: num_qubits, capacity });
        }
        let dim = 1usize << num_qubits;
        if index >= dim as u64 {
            return Err(Error::OutOfRange { what: "basis index", value: index, limit: dim as u64 });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index as usize] = C64::new(1.0, 0.0);
        Ok(Self { amps, num_qubits, last_action: vec![0; num_qubits], clock: Clock::default() })
    }

    /// Builds a state from raw amplitudes (normalized by the caller).
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidConfig("amplitude count must be a power of two".into()));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        Ok(Self { amps, num_qubits, last_action: vec![0; num_qubits], clock: Clock::default() })
    }

    /// Re-prepares basis state `index`. The clock keeps running; every
    /// qubit counts as freshly acted on.
    pub fn reset_to_basis(&mut self, index: u64) {
        self.amps.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
        self.amps[index as usize] = C64::new(1.0, 0.0);
        let now = self.clock.elapsed();
        self.last_action.iter_mut().for_each(|t| *t = now);
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Total time of all scheduled layers and measurements so far.
    pub fn elapsed(&self) -> u64 {
        self.clock.elapsed()
    }

    pub fn last_action_time(&self, qubit: usize) -> u64 {
        self.last_action[qubit]
    }

    /// Probability mass on basis states satisfying `pred`.
    pub fn probability_where(&self, pred: impl Fn(u64) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i as u64))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Marginal distribution of the value held by `qubits` (bit `j` = `qubits[j]`).
    pub fn register_probabilities(&self, qubits: &[usize]) -> Vec<f64> {
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p != 0.0 {
                probs[gather(i, qubits)] += p;
            }
        }
        probs
    }

    /// Debug dump: one `index re im` line per amplitude.
    pub fn dump_amplitudes(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            out.push_str(&format!("{i} {:.17e} {:.17e}\n", a.re, a.im));
        }
        out
    }

    fn check_gate(&self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)
    }

    fn apply_unitary_kernel(&mut self, gate: &Gate) {
        let full = self.amps.len() - 1;
        let amps = &mut self.amps;
        match gate {
            Gate::X(q) => {
                let s = 1 << q;
                for chunk in amps.chunks_mut(2 * s) {
                    let (lo, hi) = chunk.split_at_mut(s);
                    lo.swap_with_slice(hi);
                }
            }
            Gate::Z(q) => {
                let s = 1 << q;
                for chunk in amps.chunks_mut(2 * s) {
                    chunk[s..].iter_mut().for_each(|a| *a = -*a);
                }
            }
            Gate::H(q) => apply_single(amps, *q, &Mat2::hadamard()),
            Gate::Cnot { control, target } => controlled_x(amps, full, 1 << control, 1 << target),
            Gate::Mcx { controls, target } => {
                let cmask = controls.iter().fold(0, |m, &c| m | (1 << c));
                controlled_x(amps, full, cmask, 1 << target)
            }
            Gate::Cz(a, b) => phase_flip(amps, full, (1 << a) | (1 << b)),
            Gate::Mcz { controls, target } => {
                let mask = controls.iter().fold(1 << target, |m, &c| m | (1 << c));
                phase_flip(amps, full, mask)
            }
            Gate::Swap(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for_each_subset(full & !(ba | bb), |s| amps.swap(s | ba, s | bb));
            }
            Gate::Cu { control, target, u } => {
                let (bc, bt) = (1usize << control, 1usize << target);
                let [m0, m1, m2, m3] = u.0;
                for_each_subset(full & !(bc | bt), |s| {
                    let i0 = s | bc;
                    let i1 = i0 | bt;
                    let (x, y) = (amps[i0], amps[i1]);
                    amps[i0] = m0 * x + m1 * y;
                    amps[i1] = m2 * x + m3 * y;
                });
            }
        }
    }

    /// Applies an arbitrary single-qubit matrix without touching the clock.
    pub fn apply_matrix(&mut self, qubit: usize, m: &Mat2) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        apply_single(&mut self.amps, qubit, m);
        Ok(())
    }

    /// Projects `qubits` onto `value` without sampling; returns the
    /// probability of that outcome. Fails if the outcome has zero weight.
    pub fn project(&mut self, qubits: &[usize], value: u64) -> Result<f64> {
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| gather(*i, qubits) as u64 == value)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if p <= 0.0 {
            return Err(Error::InvalidConfig(format!("outcome {value} has zero probability")));
        }
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if gather(i, qubits) as u64 == value {
                *a *= scale;
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        Ok(p)
    }
}

#[inline]
fn gather(index: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().fold(0, |v, (j, &q)| v | (((index >> q) & 1) << j))
}

/// Calls `f` on every subset of `free`, in increasing order.
#[inline]
fn for_each_subset(free: usize, mut f: impl FnMut(usize)) {
    let mut s = 0usize;
    loop {
        f(s);
        if s == free {
            break;
        }
        s = s.wrapping_sub(free) & free;
    }
}

fn apply_single(amps: &mut [C64], q: usize, m: &Mat2) {
    let s = 1 << q;
    let [m0, m1, m2, m3] = m.0;
    for chunk in amps.chunks_mut(2 * s) {
        let (lo, hi) = chunk.split_at_mut(s);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m0 * x + m1 * y;
            *b = m2 * x + m3 * y;
        }
    }
}

fn controlled_x(amps: &mut [C64], full: usize, cmask: usize, tbit: usize) {
    for_each_subset(full & !(cmask | tbit), |s| amps.swap(s | cmask, s | cmask | tbit));
}

fn phase_flip(amps: &mut [C64], full: usize, mask: usize) {
    for_each_subset(full & !mask, |s| {
        let i = s | mask;
        amps[i] = -amps[i];
    });
}

/// Applies pending idle noise to `qubits` as of time `at`.
fn inject_noise<R: Rng + ?Sized>(
    state: &mut QuantumState,
    qubits: &[usize],
    at: u64,
    noise: &NoiseParams,
    rng: &mut R,
) {
    for &q in qubits {
        let elapsed = at.saturating_sub(state.last_action[q]);
        if elapsed == 0 {
            continue;
        }
        let u = sample_error_unitary(elapsed as f64, noise, rng);
        if u != Mat2::identity() {
            apply_single(&mut state.amps, q, &u);
        }
    }
}

/// Applies one gate. With `noise`, each touched qubit first receives its
/// sampled idle error; multi-controlled gates are then rejected. In ideal mode
/// multi-controlled gates are applied directly and do not advance the clock.
pub fn apply_gate<R: Rng + ?Sized>(
    state: &mut QuantumState,
    gate: &Gate,
    noise: Option<&NoiseParams>,
    rng: &mut R,
) -> Result<()> {
    state.check_gate(gate)?;
    if gate.is_multi_controlled() {
        if noise.is_some() {
            return Err(Error::Undecomposed(gate.to_string()));
        }
        state.apply_unitary_kernel(gate);
        return Ok(());
    }
    let duration = gate_duration(gate)?;
    let start = state.clock.place(gate.support_mask(), duration);
    let qubits = gate.qubits();
    if let Some(params) = noise {
        inject_noise(state, &qubits, start, params, rng);
    }
    state.apply_unitary_kernel(gate);
    for q in qubits {
        state.last_action[q] = start + duration;
    }
    Ok(())
}

/// Measures `qubits` (bit `j` of the outcome is `qubits[j]`) as one
/// measurement event of [`MEASUREMENT_TIME`].
pub fn measure_register<R: Rng + ?Sized>(
    state: &mut QuantumState,
    qubits: &[usize],
    noise: Option<&NoiseParams>,
    rng: &mut R,
) -> Result<u64> {
    for &q in qubits {
        if q >= state.num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: state.num_qubits });
        }
    }
    let start = state.clock.measure();
    if let Some(params) = noise {
        inject_noise(state, qubits, start, params, rng);
    }
    let probs = state.register_probabilities(qubits);
    let total: f64 = probs.iter().sum();
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut outcome = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if r < acc && p > 0.0 {
            outcome = k;
            break;
        }
    }
    let scale = 1.0 / probs[outcome].sqrt();
    for (i, a) in state.amps.iter_mut().enumerate() {
        if gather(i, qubits) == outcome {
            *a *= scale;
        } else {
            *a = C64::new(0.0, 0.0);
        }
    }
    for &q in qubits {
        state.last_action[q] = start + MEASUREMENT_TIME;
    }
    Ok(outcome as u64)
}

/// Ideal or noisy execution policy bundled for drivers.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Engine {
    pub noise: Option<NoiseParams>,
}

impl Engine {
    pub fn ideal() -> Self {
        Self { noise: None }
    }

    pub fn noisy(params: NoiseParams) -> Self {
        Self { noise: Some(params) }
    }

    pub fn is_noisy(&self) -> bool {
        self.noise.is_some()
    }

    pub fn apply_gate<R: Rng + ?Sized>(&self, state: &mut QuantumState, gate: &Gate, rng: &mut R) -> Result<()> {
        apply_gate(state, gate, self.noise.as_ref(), rng)
    }

    pub fn apply_circuit<R: Rng + ?Sized>(&self, state: &mut QuantumState, gates: &[Gate], rng: &mut R) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(state, g, rng))
    }

    pub fn measure<R: Rng + ?Sized>(&self, state: &mut QuantumState, qubits: &[usize], rng: &mut R) -> Result<u64> {
        measure_register(state, qubits, self.noise.as_ref(), rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::inverse_circuit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn close(a: C64, re: f64, im: f64) -> bool {
        (a - C64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = QuantumState::new(1).unwrap();
        apply_gate(&mut s, &Gate::H(0), None, &mut rng()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(s.amplitudes()[0], h, 0.0) && close(s.amplitudes()[1], h, 0.0));
    }

    #[test]
    fn x_on_qubit_zero_sets_lsb() {
        let mut s = QuantumState::new(2).unwrap();
        apply_gate(&mut s, &Gate::X(0), None, &mut rng()).unwrap();
        assert!(close(s.amplitudes()[0b01], 1.0, 0.0));
    }

    #[test]
    fn mcz_flips_only_all_ones() {
        let mut amps = vec![C64::new(0.25, 0.0); 16];
        amps[15] = C64::new(0.25, 0.0);
        let mut s = QuantumState::from_amplitudes(amps).unwrap();
        apply_gate(&mut s, &Gate::mcz(&[0, 1, 2], 3), None, &mut rng()).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expect = if i == 15 { -0.25 } else { 0.25 };
            assert!(close(*a, expect, 0.0), "index {i}");
        }
    }

    #[test]
    fn born_rule_frequencies() {
        let mut r = ChaCha8Rng::seed_from_u64(11);
        let mut ones = 0;
        let n = 10_000;
        for _ in 0..n {
            let mut s = QuantumState::new(1).unwrap();
            apply_gate(&mut s, &Gate::H(0), None, &mut r).unwrap();
            ones += measure_register(&mut s, &[0], None, &mut r).unwrap();
        }
        let f = ones as f64 / n as f64;
        assert!((0.485..=0.515).contains(&f), "frequency {f}");
    }

    #[test]
    fn basis_measurement_is_deterministic_and_idempotent() {
        let mut s = QuantumState::basis(3, 5).unwrap();
        let before = s.amplitudes().to_vec();
        assert_eq!(measure_register(&mut s, &[0, 1, 2], None, &mut rng()).unwrap(), 5);
        assert_eq!(s.amplitudes(), &before[..]);

        let mut s = QuantumState::new(3).unwrap();
        let mut r = rng();
        for q in 0..3 {
            apply_gate(&mut s, &Gate::H(q), None, &mut r).unwrap();
        }
        let first = measure_register(&mut s, &[0, 2], None, &mut r).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        for _ in 0..20 {
            assert_eq!(measure_register(&mut s, &[0, 2], None, &mut r).unwrap(), first);
        }
        assert_eq!(s.elapsed(), 1 + 21 * MEASUREMENT_TIME);
    }

    #[test]
    fn measurement_zeroes_inconsistent_amplitudes() {
        let mut s = QuantumState::new(3).unwrap();
        let mut r = rng();
        for q in 0..3 {
            apply_gate(&mut s, &Gate::H(q), None, &mut r).unwrap();
        }
        let w = measure_register(&mut s, &[1, 2], None, &mut r).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            if ((i >> 1) as u64) != w {
                assert_eq!(*a, C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn circuit_then_inverse_is_identity() {
        let gates = vec![
            Gate::H(0),
            Gate::H(2),
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cu { control: 2, target: 0, u: Mat2::pauli_x().sqrt_unitary() },
            Gate::mcx(&[0, 1], 3),
            Gate::Swap(1, 3),
            Gate::mcz(&[0, 1, 2], 3),
            Gate::Z(1),
        ];
        let mut s = QuantumState::basis(4, 6).unwrap();
        let mut r = rng();
        let start = s.amplitudes().to_vec();
        let e = Engine::ideal();
        e.apply_circuit(&mut s, &gates, &mut r).unwrap();
        e.apply_circuit(&mut s, &inverse_circuit(&gates), &mut r).unwrap();
        for (a, b) in s.amplitudes().iter().zip(start.iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn noisy_mode_rejects_undecomposed() {
        let mut s = QuantumState::new(3).unwrap();
        let p = NoiseParams::new(100.0, 100.0).unwrap();
        let err = apply_gate(&mut s, &Gate::mcx(&[0, 1], 2), Some(&p), &mut rng()).unwrap_err();
        assert!(matches!(err, Error::Undecomposed(_)));
    }

    #[test]
    fn infinite_coherence_matches_ideal() {
        let gates = vec![Gate::H(0), Gate::X(1), Gate::Cnot { control: 0, target: 2 }, Gate::H(1), Gate::Cz(1, 2)];
        let mut a = QuantumState::new(3).unwrap();
        let mut b = QuantumState::new(3).unwrap();
        let off = NoiseParams::noiseless();
        let mut r = rng();
        for g in &gates {
            apply_gate(&mut a, g, None, &mut r).unwrap();
            apply_gate(&mut b, g, Some(&off), &mut r).unwrap();
        }
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn timestamps_follow_schedule() {
        let mut s = QuantumState::new(3).unwrap();
        let mut r = rng();
        apply_gate(&mut s, &Gate::Cnot { control: 0, target: 1 }, None, &mut r).unwrap();
        apply_gate(&mut s, &Gate::X(2), None, &mut r).unwrap();
        apply_gate(&mut s, &Gate::X(0), None, &mut r).unwrap();
        assert_eq!(s.last_action_time(1), 2);
        assert_eq!(s.last_action_time(2), 1);
        assert_eq!(s.last_action_time(0), 3);
        assert_eq!(s.elapsed(), 3);
    }

    #[test]
    fn same_seed_same_everything() {
        let p = NoiseParams::new(30.0, 40.0).unwrap();
        let run = |seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let mut s = QuantumState::new(3).unwrap();
            for q in 0..3 {
                apply_gate(&mut s, &Gate::H(q), Some(&p), &mut r).unwrap();
                apply_gate(&mut s, &Gate::Cnot { control: q, target: (q + 1) % 3 }, Some(&p), &mut r).unwrap();
            }
            let m = measure_register(&mut s, &[0, 1], Some(&p), &mut r).unwrap();
            (m, s.amplitudes().to_vec())
        };
        assert_eq!(run(5), run(5));
    }
}
