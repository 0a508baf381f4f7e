//! Execution backends for the Gmin drivers.
//!
//! A [`GminDevice`] exposes the quantum steps of one search iteration:
//! prepare `V|0⟩|v⟩|v_best⟩`, apply `Grov`, and measure. The state-vector
//! device runs the compiled circuits on [`QuantumState`]; run time is
//! accounted from the decomposed gate list in both ideal and noisy mode.

use std::sync::Arc;

use rand::Rng;

use crate::circuits::{build_group_action, build_phcomp, build_us, CircuitBlock};
use crate::error::Result;
use crate::gate::{gate_duration, Gate};
use crate::groups::ProblemInstance;
use crate::layout::RegisterLayout;
use crate::schedule::Clock;
use crate::state::{Engine, QuantumState};

/// Quantum side of one Gmin iteration.
pub trait GminDevice {
    /// Search-space size `|G|` (index states of the group register).
    fn group_size(&self) -> u64;

    /// Initializes `|0⟩|v⟩|v_best⟩|0⟩` and applies `V`.
    fn prepare<R: Rng + ?Sized>(&mut self, v: u64, v_best: u64, rng: &mut R) -> Result<()>;

    fn grov<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()>;

    /// Measures both position registers and the ancilla in one event.
    fn measure_positions<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<PositionReadout>;

    fn measure_group<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64>;

    /// Quantum run time so far, in single-qubit gate times.
    fn elapsed(&self) -> u64;
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PositionReadout {
    pub v1: u64,
    pub v2: u64,
    pub ancilla: u64,
}

/// `V = H^m` on the group register.
pub fn build_v(layout: &RegisterLayout) -> CircuitBlock {
    let gates = layout.group().qubits().into_iter().map(Gate::H).collect();
    CircuitBlock::from_gates("V", gates)
}

/// `Ĝ · PhComp · Ĝ⁻¹`: flips the sign of `|x⟩|v⟩|w⟩` exactly when `g(x)·v < w`.
pub fn build_oracle(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<CircuitBlock> {
    let g = build_group_action(&instance.group, layout, false)?;
    let cmp = build_phcomp(layout.position1(), layout.position2(), layout.ancilla())?;
    let g_inv = g.inverse();
    Ok(g.then(&cmp).then(&g_inv).renamed("oracle"))
}

/// The oracle followed by `U_s` on the group register.
pub fn build_grov(instance: &ProblemInstance, layout: &RegisterLayout) -> Result<CircuitBlock> {
    let us = build_us(&layout.group().qubits(), &layout.ancilla().qubits());
    Ok(build_oracle(instance, layout)?.then(&us).renamed("Grov"))
}

/// Timing entry of a decomposed gate: support mask and duration.
type Timed = (u64, u64);

fn timing(block: &CircuitBlock) -> Vec<Timed> {
    block
        .gates()
        .iter()
        .map(|g| (g.support_mask(), gate_duration(g).expect("decomposed")))
        .collect()
}

/// Circuits for one problem instance, built once and shared by every trial.
#[derive(Debug)]
pub struct GminCircuits {
    pub instance: ProblemInstance,
    pub layout: RegisterLayout,
    pub v: CircuitBlock,
    pub grov: CircuitBlock,
    pub grov_decomposed: CircuitBlock,
    v_timing: Vec<Timed>,
    grov_timing: Vec<Timed>,
}

impl GminCircuits {
    pub fn new(instance: &ProblemInstance, ancilla: usize) -> Result<Arc<Self>> {
        let layout = RegisterLayout::for_instance(instance, ancilla)?;
        let v = build_v(&layout);
        let grov = build_grov(instance, &layout)?;
        let grov_decomposed = grov.decomposed();
        Ok(Arc::new(Self {
            instance: instance.clone(),
            layout,
            v_timing: timing(&v),
            grov_timing: timing(&grov_decomposed),
            v,
            grov,
            grov_decomposed,
        }))
    }
}

/// Full state-vector backend.
pub struct StateVectorDevice {
    circuits: Arc<GminCircuits>,
    engine: Engine,
    state: QuantumState,
    clock: Clock,
    group_qubits: Vec<usize>,
    check_qubits: Vec<usize>,
}

impl StateVectorDevice {
    pub fn new(circuits: Arc<GminCircuits>, engine: Engine) -> Result<Self> {
        let layout = circuits.layout;
        let state = QuantumState::new(layout.total())?;
        let mut check_qubits = layout.position1().qubits();
        check_qubits.extend(layout.position2().qubits());
        check_qubits.extend(layout.ancilla().qubits());
        Ok(Self {
            group_qubits: layout.group().qubits(),
            check_qubits,
            circuits,
            engine,
            state,
            clock: Clock::default(),
        })
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.circuits.layout
    }

    /// Probability that a group measurement now lands in `marked`.
    pub fn group_probability(&self, marked: impl Fn(u64) -> bool) -> f64 {
        self.state
            .register_probabilities(&self.group_qubits)
            .iter()
            .enumerate()
            .filter(|(x, _)| marked(*x as u64))
            .map(|(_, p)| p)
            .sum()
    }

    fn run<R: Rng + ?Sized>(&mut self, block: &CircuitBlock, decomposed: &CircuitBlock, times: &[Timed], rng: &mut R) -> Result<()> {
        let gates = if self.engine.is_noisy() { decomposed } else { block };
        self.engine.apply_circuit(&mut self.state, gates.gates(), rng)?;
        for &(mask, d) in times {
            self.clock.place(mask, d);
        }
        Ok(())
    }
}

impl GminDevice for StateVectorDevice {
    fn group_size(&self) -> u64 {
        self.circuits.instance.index_count()
    }

    fn prepare<R: Rng + ?Sized>(&mut self, v: u64, v_best: u64, rng: &mut R) -> Result<()> {
        let c = Arc::clone(&self.circuits);
        self.state.reset_to_basis(c.layout.basis_index(0, v, v_best));
        self.run(&c.v, &c.v, &c.v_timing, rng)
    }

    fn grov<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let c = Arc::clone(&self.circuits);
        self.run(&c.grov, &c.grov_decomposed, &c.grov_timing, rng)
    }

    fn measure_positions<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<PositionReadout> {
        self.clock.measure();
        let raw = self.engine.measure(&mut self.state, &self.check_qubits, rng)?;
        let l = &self.circuits.layout;
        let n = l.position_bits;
        let low = |x: u64, bits: usize| x & ((1u64 << bits) - 1);
        Ok(PositionReadout {
            v1: low(raw, n),
            v2: low(raw >> n, n),
            ancilla: raw >> (2 * n),
        })
    }

    fn measure_group<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64> {
        self.clock.measure();
        self.engine.measure(&mut self.state, &self.group_qubits, rng)
    }

    fn elapsed(&self) -> u64 {
        self.clock.elapsed()
    }
}
