use gmin_core::circuits::{build_group_action, build_phcomp};
use gmin_core::groups::{build_lookup, group_apply, orbit_on_the_fly, GroupSpec, ProblemInstance};
use gmin_core::layout::{max_ancilla, Register, RegisterLayout};
use gmin_core::noise::{sample_error_unitary, NoiseParams};
use gmin_core::rng::trial_rng;
use gmin_core::state::{apply_gate, QuantumState};
use proptest::prelude::*;

fn run_basis(gates: &[gmin_core::gate::Gate], nq: usize, idx: u64) -> (u64, f64) {
    let mut rng = trial_rng(0, 0);
    let mut s = QuantumState::basis(nq, idx).unwrap();
    for g in gates {
        apply_gate(&mut s, g, None, &mut rng).unwrap();
    }
    let out = s.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap();
    (out as u64, s.amplitudes()[out].re)
}

fn instance() -> impl Strategy<Value = ProblemInstance> {
    prop_oneof![
        (1u32..=6).prop_map(|b| ProblemInstance::add_mod(b).unwrap()),
        (2u32..=7).prop_map(|s| ProblemInstance::spin_translation(s).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbits_partition_positions(inst in instance()) {
        let table = build_lookup(&inst).unwrap();
        for v in 0..inst.position_count() {
            let e = table.get(v).unwrap();
            prop_assert_eq!(group_apply(&inst.group, e.x_rep, v).unwrap(), e.v_rep);
            prop_assert!(e.v_rep <= v);
            // representatives are fixed points of the lookup
            prop_assert_eq!(table.get(e.v_rep).unwrap().v_rep, e.v_rep);
            prop_assert_eq!(*e, orbit_on_the_fly(&inst, v).unwrap());
        }
    }

    #[test]
    fn group_action_then_inverse_is_identity(bits in 1u32..=4, anc_frac in 0.0f64..=1.0, x in 0u64..16, v in 0u64..16) {
        let spec = GroupSpec::add_mod(bits).unwrap();
        let n = bits as usize;
        let a = (anc_frac * max_ancilla(n) as f64).floor() as usize;
        let layout = RegisterLayout::new(n, n, a).unwrap();
        let (x, v) = (x % (1 << bits), v % (1 << bits));
        let g = build_group_action(&spec, &layout, false).unwrap();
        let gi = build_group_action(&spec, &layout, true).unwrap();
        let both = g.then(&gi).decomposed();
        let idx = layout.basis_index(x, v, 0);
        let (out, amp) = run_basis(both.gates(), layout.total(), idx);
        prop_assert_eq!(out, idx);
        prop_assert!((amp - 1.0).abs() < 1e-10);
    }

    #[test]
    fn phcomp_is_diagonal_sign(n in 1usize..=5, a_val in 0u64..32, b_val in 0u64..32) {
        let (a_val, b_val) = (a_val % (1 << n), b_val % (1 << n));
        let anc = max_ancilla(n);
        let block = build_phcomp(Register::new(0, n), Register::new(n, n), Register::new(2 * n, anc)).unwrap();
        let idx = a_val | b_val << n;
        let (out, sign) = run_basis(block.decomposed().gates(), 2 * n + anc, idx);
        prop_assert_eq!(out, idx);
        let expect = if a_val < b_val { -1.0 } else { 1.0 };
        prop_assert!((sign - expect).abs() < 1e-10);
    }

    #[test]
    fn error_unitaries_are_unitary(t1 in 1.0f64..1e4, ratio in 0.1f64..=2.0, elapsed in 0.0f64..500.0, seed in any::<u64>()) {
        let params = NoiseParams::new(t1, ratio * t1).unwrap();
        let u = sample_error_unitary(elapsed, &params, &mut trial_rng(seed, 0));
        prop_assert!(u.is_unitary(1e-12));
    }
}
