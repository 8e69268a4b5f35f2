//! Property-based checks over randomized inputs: structural invariants that
//! must hold for *any* potential, packet, or small circuit, not just the
//! stock scenarios.

use num_complex::Complex64;
use proptest::collection::vec as pvec;
use proptest::prelude::*;
use qwave::circuit::{
    inverse_qft_circuit, qft_circuit, z_string_exponential, Circuit, Gate,
};
use qwave::grid::{make_grid, resample_to_common_grid, ObservableSnapshot, WavePacket};
use qwave::pauli::{decompose_diagonal, reconstruct_diagonal};
use qwave::sim::{run_circuit, sample_shots, StateVector};
use qwave::transpile::{transpile, TranspileTarget};

fn normalized_state(n: usize, raw: &[(f64, f64)]) -> StateVector {
    let m = 1usize << n;
    let mut amplitudes: Vec<Complex64> = raw[..m]
        .iter()
        .map(|(re, im)| Complex64::new(*re, *im))
        .collect();
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
    } else {
        for a in &mut amplitudes {
            *a /= norm;
        }
    }
    StateVector { n_qubits: n, amplitudes }
}

fn max_amp_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trips(n in 1usize..=6, seed_values in pvec(-50.0f64..50.0, 64)) {
        let m = 1usize << n;
        let v = &seed_values[..m];
        let decomp = decompose_diagonal(v).unwrap();
        prop_assert!(decomp.terms.len() <= m);
        let rebuilt = reconstruct_diagonal(&decomp);
        for (a, b) in rebuilt.iter().zip(v) {
            prop_assert!((a - b).abs() < 1e-10, "rebuilt {a} vs {b}");
        }
    }

    #[test]
    fn resampling_preserves_total_density(n in 2usize..=5, raw in pvec(0.0f64..1.0, 64)) {
        let m = 1usize << n;
        let density = &raw[..m];
        let resampled = resample_to_common_grid(density, 32).unwrap();
        prop_assert_eq!(resampled.len(), 32);
        let before: f64 = density.iter().sum();
        let after: f64 = resampled.iter().sum();
        prop_assert!((before - after).abs() < 1e-9 * before.max(1.0));
        // Finer than the target is out of contract: a 64-point density has
        // no integer upsample factor onto 32 points.
        prop_assert!(resample_to_common_grid(&raw[..64], 32).is_err());
    }

    #[test]
    fn qft_then_inverse_is_identity(n in 1usize..=5, raw in pvec((-1.0f64..1.0, -1.0f64..1.0), 32)) {
        let state = normalized_state(n, &raw);
        let mut circuit = qft_circuit(n);
        circuit.extend(&inverse_qft_circuit(n));
        let out = run_circuit(&state, &circuit).unwrap();
        prop_assert!(max_amp_diff(&out.amplitudes, &state.amplitudes) < 1e-10);
    }

    #[test]
    fn z_string_phases_follow_parity(
        n in 1usize..=5,
        mask_seed in 1usize..32,
        angle in -3.0f64..3.0,
    ) {
        let m = 1usize << n;
        let mask = 1 + mask_seed % (m - 1).max(1);
        prop_assume!(mask < m);
        let circuit = z_string_exponential(mask, angle, n).unwrap();
        for basis in 0..m {
            let state = StateVector::basis(n, basis);
            let out = run_circuit(&state, &circuit).unwrap();
            let parity = if (mask & basis).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let expected = Complex64::from_polar(1.0, -angle * parity);
            prop_assert!((out.amplitudes[basis] - expected).norm() < 1e-12);
            for (i, amp) in out.amplitudes.iter().enumerate() {
                if i != basis {
                    prop_assert!(amp.norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn transpile_preserves_action(
        gate_picks in pvec((0usize..8, 0usize..3, 0usize..3, -3.0f64..3.0), 1..12),
        raw in pvec((-1.0f64..1.0, -1.0f64..1.0), 32),
    ) {
        let n = 3usize;
        let mut circuit = Circuit::new(n, "soup");
        for (kind, a, b, theta) in gate_picks {
            let b = if a == b { (b + 1) % n } else { b };
            let gate = match kind {
                0 => Gate::H { q: a },
                1 => Gate::X { q: a },
                2 => Gate::Sx { q: a },
                3 => Gate::Rz { q: a, theta },
                4 => Gate::Phase { q: a, theta },
                5 => Gate::CPhase { control: a, target: b, theta },
                6 => Gate::Cnot { control: a, target: b },
                _ => Gate::Swap { a: a.min(b), b: a.max(b) },
            };
            circuit.push(gate);
        }
        let target = TranspileTarget::linear(n);
        let lowered = transpile(&circuit, &target).unwrap();
        for gate in &lowered.gates {
            let in_basis = target.basis_gates.iter().any(|g| g == gate.kind_name())
                || matches!(gate, Gate::GlobalPhase { .. });
            prop_assert!(in_basis, "non-basis gate {:?}", gate);
        }
        let state = normalized_state(n, &raw);
        let direct = run_circuit(&state, &circuit).unwrap();
        let routed = run_circuit(&state, &lowered).unwrap();
        // Global phase is tracked exactly, so this is plain equality.
        prop_assert!(max_amp_diff(&direct.amplitudes, &routed.amplitudes) < 1e-9);
    }

    #[test]
    fn shot_sampling_is_seeded_and_complete(
        n in 1usize..=5,
        raw in pvec((-1.0f64..1.0, -1.0f64..1.0), 32),
        shots in 1u64..5000,
        seed in 0u64..1000,
    ) {
        let state = normalized_state(n, &raw);
        let h1 = sample_shots(&state, shots, seed);
        let h2 = sample_shots(&state, shots, seed);
        prop_assert_eq!(&h1.counts, &h2.counts);
        prop_assert_eq!(h1.counts.values().sum::<u64>(), shots);
        for index in h1.counts.keys() {
            prop_assert!(*index < (1usize << n));
        }
    }

    #[test]
    fn snapshot_observables_are_consistent(
        n in 2usize..=5,
        raw in pvec((-1.0f64..1.0, -1.0f64..1.0), 32),
        r_max in 1.0f64..10.0,
    ) {
        let grid = make_grid(n, 0.0, r_max).unwrap();
        let state = normalized_state(n, &raw);
        let packet = WavePacket::from_amplitudes(grid, state.amplitudes).unwrap();
        let snap = ObservableSnapshot::measure(3, 0.5, &packet);
        prop_assert!((snap.norm - 1.0).abs() < 1e-10);
        prop_assert!(snap.mean_r >= 0.0 && snap.mean_r < r_max);
        prop_assert!(snap.sigma >= 0.0);
        prop_assert!(snap.sigma <= r_max);
        let total: f64 = snap.density.iter().sum();
        prop_assert!((total - snap.norm).abs() < 1e-10);
    }
}
