#![allow(dead_code)]

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Critical value of the two-sample KS statistic at level 1%.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n * m) as f64).sqrt()
}

/// Calls to solution, with unsolved trials mapped past every solved one.
pub fn solution_times(rs: &[gmin_core::grover::TrialResult]) -> Vec<f64> {
    rs.iter().map(|r| r.calls_to_solution.map_or(f64::INFINITY, |c| c as f64)).collect()
}

use std::collections::BTreeMap;

use gmin_core::gate::Gate;
use num_complex::Complex64 as C64;

/// Sparse reference simulator: keeps only non-zero amplitudes, so
/// exhaustive basis sweeps stay cheap on wide registers.
#[derive(Clone, Debug)]
pub struct Sparse(pub BTreeMap<u64, C64>);

impl Sparse {
    pub fn basis(idx: u64) -> Self {
        Sparse(BTreeMap::from([(idx, C64::new(1.0, 0.0))]))
    }

    fn all_set(idx: u64, qs: &[usize]) -> bool {
        qs.iter().all(|q| idx >> q & 1 == 1)
    }

    fn map_single(&mut self, t: usize, u: [C64; 4], controls: &[usize]) {
        let mut out: BTreeMap<u64, C64> = BTreeMap::new();
        for (&i, &a) in &self.0 {
            if !Self::all_set(i, controls) {
                *out.entry(i).or_default() += a;
                continue;
            }
            let b = (i >> t & 1) as usize;
            let i0 = i & !(1 << t);
            let i1 = i | 1 << t;
            // column b of u
            *out.entry(i0).or_default() += u[b] * a;
            *out.entry(i1).or_default() += u[2 + b] * a;
        }
        out.retain(|_, a| a.norm() > 1e-13);
        self.0 = out;
    }

    pub fn apply(&mut self, g: &Gate) {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let x = [zero, one, one, zero];
        let z = [one, zero, zero, -one];
        let h = [one, one, one, -one].map(|c| c * std::f64::consts::FRAC_1_SQRT_2);
        match g {
            Gate::X(t) => self.map_single(*t, x, &[]),
            Gate::H(t) => self.map_single(*t, h, &[]),
            Gate::Z(t) => self.map_single(*t, z, &[]),
            Gate::Cnot { control, target } => self.map_single(*target, x, &[*control]),
            Gate::Cz(c, t) => self.map_single(*t, z, &[*c]),
            Gate::Swap(a, b) => {
                self.0 = std::mem::take(&mut self.0)
                    .into_iter()
                    .map(|(i, amp)| {
                        let (ba, bb) = (i >> a & 1, i >> b & 1);
                        let j = if ba != bb { i ^ (1 << a) ^ (1 << b) } else { i };
                        (j, amp)
                    })
                    .collect()
            }
            Gate::Cu { control, target, u } => self.map_single(*target, u.0, &[*control]),
            Gate::Mcx { controls, target } => self.map_single(*target, x, controls),
            Gate::Mcz { controls, target } => self.map_single(*target, z, controls),
        }
    }

    pub fn run(gates: &[Gate], idx: u64) -> Self {
        let mut s = Self::basis(idx);
        for g in gates {
            s.apply(g);
        }
        s
    }

    /// The single surviving basis label and its amplitude, if the state is a basis state.
    pub fn as_basis(&self) -> Option<(u64, C64)> {
        match self.0.len() {
            1 => self.0.iter().next().map(|(i, a)| (*i, *a)),
            _ => None,
        }
    }
}
