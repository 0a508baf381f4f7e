//! Greedy layering of decomposed circuits.
//!
//! Consecutive gates with pairwise disjoint support share a layer; a gate that
//! overlaps the open layer closes it. A layer lasts as long as its slowest gate.
//! The same rule drives the engine clock, so the duration reported here is the
//! time the noisy engine spends executing the same gate list.

use crate::error::Result;
use crate::gate::{gate_duration, Gate, MEASUREMENT_TIME};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    /// Gate indices per layer, in circuit order.
    pub layers: Vec<Vec<usize>>,
    pub total_duration: u64,
}

pub fn schedule(gates: &[Gate]) -> Result<Schedule> {
    let mut clock = Clock::default();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, g) in gates.iter().enumerate() {
        let before = clock.layer_count;
        clock.place(g.support_mask(), gate_duration(g)?);
        if clock.layer_count != before || layers.is_empty() {
            layers.push(Vec::new());
        }
        layers.last_mut().expect("layer opened above").push(i);
    }
    Ok(Schedule { layers, total_duration: clock.finish() })
}

/// Streaming form of [`schedule`] that also times measurement events.
#[derive(Clone, Debug, Default)]
pub struct Clock {
    /// End of all closed layers and measurements.
    now: u64,
    layer_support: u64,
    layer_duration: u64,
    layer_count: usize,
}

impl Clock {
    /// Places a gate and returns its start time.
    pub fn place(&mut self, support: u64, duration: u64) -> u64 {
        if self.layer_support & support != 0 || self.layer_support == 0 {
            self.close_layer();
            self.layer_count += 1;
        }
        self.layer_support |= support;
        self.layer_duration = self.layer_duration.max(duration);
        self.now
    }

    fn close_layer(&mut self) {
        self.now += self.layer_duration;
        self.layer_support = 0;
        self.layer_duration = 0;
    }

    /// Closes the open layer and books a measurement event; returns its start time.
    pub fn measure(&mut self) -> u64 {
        self.close_layer();
        let start = self.now;
        self.now += MEASUREMENT_TIME;
        start
    }

    /// Time after the open layer completes.
    pub fn elapsed(&self) -> u64 {
        self.now + self.layer_duration
    }

    /// Closes the open layer and returns the total elapsed time.
    pub fn finish(&mut self) -> u64 {
        self.close_layer();
        self.now
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_single_qubit_gates_share_a_layer() {
        let s = schedule(&[Gate::X(0), Gate::X(1)]).unwrap();
        assert_eq!(s.layers, vec![vec![0, 1]]);
        assert_eq!(s.total_duration, 1);
    }

    #[test]
    fn overlapping_support_opens_a_new_layer() {
        let s = schedule(&[Gate::X(0), Gate::Cnot { control: 0, target: 1 }]).unwrap();
        assert_eq!(s.layers.len(), 2);
        assert_eq!(s.total_duration, 3);
    }

    #[test]
    fn layer_duration_is_the_max() {
        let s = schedule(&[Gate::Cnot { control: 0, target: 1 }, Gate::X(2), Gate::X(3)]).unwrap();
        assert_eq!(s.layers.len(), 1);
        assert_eq!(s.total_duration, 2);
    }

    #[test]
    fn greedy_is_consecutive_not_asap() {
        // X(2) cannot move back past the CNOT layer boundary.
        let g = [Gate::X(0), Gate::X(0), Gate::X(2)];
        let s = schedule(&g).unwrap();
        assert_eq!(s.layers, vec![vec![0], vec![1, 2]]);
        assert_eq!(s.total_duration, 2);
    }

    #[test]
    fn empty_and_undecomposed() {
        assert_eq!(schedule(&[]).unwrap().total_duration, 0);
        assert!(schedule(&[Gate::mcx(&[0, 1], 2)]).is_err());
    }

    #[test]
    fn measurement_closes_layer() {
        let mut c = Clock::default();
        c.place(0b1, 2);
        assert_eq!(c.measure(), 2);
        assert_eq!(c.place(0b1, 1), 12);
        assert_eq!(c.finish(), 13);
    }
}
