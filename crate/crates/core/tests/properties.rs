mod common;

use std::f64::consts::{FRAC_PI_2, TAU};

use acsim::ac_model::{
    compile_circuit, crosstalk_phase, execute_schedule, gate_of_move, ACParameters, BraidMove,
    Layout, NoiseSpec,
};
use acsim::experiments::{deformation_trial, DeformationConfig};
use acsim::gates::{u_phase_matrix, Circuit, Gate};
use acsim::geometry::{
    circle_path, enclosed_area, min_distance, perturb_path, winding_number, Point2, Polyline,
};
use acsim::matrix::{Matrix, C64};
use acsim::simulator::{circuit_unitary, format_label, measure_all, probability, StateVector};
use acsim::synthesis::{euler_decompose, phase_distance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Point2> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn closed_path() -> impl Strategy<Value = Polyline> {
    prop::collection::vec(point(), 3..40).prop_map(|v| Polyline::closed(v).unwrap())
}

fn offsets() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..0.99f64, 0.0..TAU), 40)
}

fn gamma0() -> f64 {
    FRAC_PI_2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reversal_negates_winding_and_area(path in closed_path(), c in point()) {
        prop_assume!(min_distance(&path, c).unwrap() > 1e-6);
        let rev = path.reversed();
        prop_assert_eq!(winding_number(&rev, c).unwrap().n, -winding_number(&path, c).unwrap().n);
        let (a, b) = (enclosed_area(&path).unwrap(), enclosed_area(&rev).unwrap());
        prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn translation_preserves_winding(path in closed_path(), c in point(), t in point()) {
        prop_assume!(min_distance(&path, c).unwrap() > 1e-6);
        let moved = path.translated(t.x, t.y);
        let w = winding_number(&moved, c.translate(t.x, t.y)).unwrap().n;
        prop_assert_eq!(w, winding_number(&path, c).unwrap().n);
    }

    #[test]
    fn bounded_deformation_preserves_winding(path in closed_path(), c in point(), off in offsets()) {
        let clearance = min_distance(&path, c).unwrap();
        prop_assume!(clearance > 1e-6);
        let distinct = path.distinct_vertices();
        let moved: Vec<Point2> = distinct
            .iter()
            .zip(&off)
            .map(|(p, &(r, th))| p.translate(r * clearance * th.cos(), r * clearance * th.sin()))
            .collect();
        let deformed = Polyline::closed(moved).unwrap();
        prop_assert!(path.max_displacement(&deformed) < clearance);
        prop_assert_eq!(winding_number(&deformed, c).unwrap().n, winding_number(&path, c).unwrap().n);
    }

    #[test]
    fn perturbation_is_seeded(path in closed_path(), sigma in 0.0..1.0f64, seed: u64) {
        prop_assert_eq!(perturb_path(&path, sigma, seed), perturb_path(&path, sigma, seed));
        prop_assert_eq!(perturb_path(&path, 0.0, seed), path);
    }

    #[test]
    fn bounded_loop_deformation_keeps_gate_bits(turns in 1i64..5, off in offsets(), d_min in 0.5..4.0f64) {
        let layout = Layout::line(2, d_min).unwrap();
        let site = layout.qubits()[0].site_a;
        let path = circle_path(site, d_min / 4.0, turns, 10).unwrap();
        let clearance = min_distance(&path, site).unwrap();
        let moved: Vec<Point2> = path
            .distinct_vertices()
            .iter()
            .zip(off.iter().cycle())
            .map(|(p, &(r, th))| p.translate(r * clearance * th.cos(), r * clearance * th.sin()))
            .collect();
        let params = ACParameters::default();
        let gate = |path: Polyline| {
            let mv = BraidMove::InterQubitLoop { encircled: 0, mover: 1, path };
            gate_of_move(&mv, &layout, &params).unwrap().gate
        };
        let ideal = gate(path.clone());
        let deformed = gate(Polyline::closed(moved).unwrap());
        let (Gate::ControlledPhase { gamma: a, .. }, Gate::ControlledPhase { gamma: b, .. }) = (ideal, deformed) else {
            return Err(TestCaseError::fail("loop is not a controlled phase"));
        };
        prop_assert_eq!(a.to_bits(), b.to_bits());
        prop_assert_eq!(a, turns as f64 * gamma0());
    }

    #[test]
    fn conditional_loop_phase_bookkeeping(n in prop_oneof![-64i64..=-1, 1i64..=64]) {
        let layout = Layout::line(1, 1.0).unwrap();
        let path = circle_path(layout.qubits()[0].site_b, 0.25, n, 32).unwrap();
        let mv = BraidMove::ConditionalSelfLoop { target: 0, path };
        let g = gate_of_move(&mv, &layout, &ACParameters::default()).unwrap();
        let Gate::OneQubitPhase { gamma, .. } = g.gate else {
            return Err(TestCaseError::fail("conditional loop is not a one-qubit phase"));
        };
        let physical = [C64::from_polar(1.0, n as f64 * gamma0()), C64::new(1.0, 0.0)];
        let realized = u_phase_matrix(gamma).scale(C64::from_polar(1.0, g.global_phase));
        for (k, want) in physical.iter().enumerate() {
            prop_assert!((realized.0[k][k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn compile_execute_round_trip(steps in prop::collection::vec((0usize..3, 0usize..3, -8i64..=8, -3.0..3.0f64), 1..12)) {
        let params = ACParameters::default();
        let mut c = Circuit::new(3).unwrap();
        for (kind, q, k, theta) in steps {
            let angle = k as f64 * params.gamma0;
            c.push(match kind {
                0 => Gate::OneQubitPhase { target: q, gamma: angle },
                1 => Gate::PartialSwap { target: q, theta },
                _ => Gate::ControlledPhase { first: q, second: (q + 1) % 3, gamma: angle },
            }).unwrap();
        }
        let layout = Layout::line(3, 1.0).unwrap();
        let schedule = compile_circuit(&c, &layout, &params).unwrap();
        let run = execute_schedule(&schedule, &params, &NoiseSpec::zero(), 0).unwrap();
        prop_assert!(run.faults.is_empty());
        let a = circuit_unitary(&c).unwrap();
        let b = circuit_unitary(&run.circuit).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9);
    }

    #[test]
    fn crosstalk_is_linear_in_lambda_and_decays(lambda in 0.0..5.0f64, far in 1.0..1e6f64) {
        let path = circle_path(Point2::new(0.0, 0.0), 1.0, 1, 32).unwrap();
        let site = Point2::new(far + 1.0, 0.0);
        let one = crosstalk_phase(&path, site, lambda);
        prop_assert!((crosstalk_phase(&path, site, 2.0 * lambda) - 2.0 * one).abs() <= 1e-12 * one.max(1.0));
        prop_assert!(crosstalk_phase(&path, Point2::new(10.0 * far + 1.0, 0.0), lambda) <= one);
    }

    #[test]
    fn euler_round_trip(a in -10.0..10.0f64, b in 0.0..TAU, d in -10.0..10.0f64, phi in -10.0..10.0f64) {
        let u = u_phase_matrix(a) * acsim::gates::u_swap_matrix(b) * u_phase_matrix(d);
        let u = u.scale(C64::from_polar(1.0, phi));
        let e = euler_decompose(&u).unwrap();
        prop_assert!((0.0..=std::f64::consts::PI).contains(&e.beta));
        prop_assert!(e.reconstruct().max_abs_diff(&u) < 1e-10);
        let d = phase_distance(&e.reconstruct().to_matrix(), &u.to_matrix()).unwrap();
        prop_assert!(d < 1e-10);
    }

    #[test]
    fn phase_distance_symmetric_and_phase_blind(seed: u64, t in -10.0..10.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unitary(&mut rng).to_matrix();
        let v = common::random_unitary(&mut rng).to_matrix();
        let d = phase_distance(&u, &v).unwrap();
        prop_assert!((d - phase_distance(&v, &u).unwrap()).abs() < 1e-12);
        let shifted = v.scale(C64::from_polar(1.0, t));
        prop_assert!((d - phase_distance(&u, &shifted).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn deformation_trial_scores(sigma in 0.0..0.2f64, seed: u64) {
        let center = Point2::new(0.0, 0.0);
        let path = circle_path(center, 1.0, 1, 32).unwrap();
        let config = DeformationConfig::default();
        let t = deformation_trial(&path, center, sigma, seed, &config).unwrap();
        if !t.topological.0 {
            prop_assert_eq!(t.topological.1, 1.0);
        }
        let moved = perturb_path(&path, sigma, seed);
        let dphase = config.lambda_area * (enclosed_area(&moved).unwrap() - enclosed_area(&path).unwrap());
        if dphase.abs() > 1e-6 {
            prop_assert!(t.dynamical.1 < 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_circuits_preserve_norm(seed: u64, width in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = common::random_state(width, &mut rng);
        let gates = (0..100).map(|_| common::random_gate(width, &mut rng)).collect();
        let out = state.run(&Circuit::with_gates(width, gates).unwrap()).unwrap();
        prop_assert!((out.norm_sqr().sqrt() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn application_is_linear(seed: u64, width in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (psi, phi) = (common::random_state(width, &mut rng), common::random_state(width, &mut rng));
        let (a, b) = (common::gaussian_c64(&mut rng), common::gaussian_c64(&mut rng));
        let gate = common::random_gate(width, &mut rng);
        let mix: Vec<C64> = psi.amplitudes().iter().zip(phi.amplitudes()).map(|(x, y)| a * x + b * y).collect();
        let norm = mix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scaled: Vec<C64> = mix.iter().map(|z| z / norm).collect();
        let lhs = StateVector::from_amplitudes(scaled).unwrap().apply(&gate).unwrap();
        let (gp, gf) = (psi.apply(&gate).unwrap(), phi.apply(&gate).unwrap());
        for i in 0..1 << width {
            let rhs = (a * gp.amplitudes()[i] + b * gf.amplitudes()[i]) / norm;
            prop_assert!((lhs.amplitudes()[i] - rhs).norm() < 1e-12);
        }
    }
}

#[test]
fn kronecker_oracle_for_every_gate_kind() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for width in 2..=3 {
        let state = common::random_state(width, &mut rng);
        for gate in [
            Gate::OneQubitPhase {
                target: width - 1,
                gamma: 0.7,
            },
            Gate::PartialSwap {
                target: 0,
                theta: -1.9,
            },
            Gate::ControlledPhase {
                first: width - 1,
                second: 0,
                gamma: 2.3,
            },
        ] {
            let full: Matrix = common::full_gate_matrix(&gate, width);
            let expect = full.mul_vec(state.amplitudes());
            let got = state.apply(&gate).unwrap();
            for (x, y) in got.amplitudes().iter().zip(&expect) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}

/// Chi-square critical value for 3 degrees of freedom at significance 0.001.
const CHI2_3DOF_001: f64 = 16.266;

#[test]
fn measurement_frequencies_fit_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for s in 0..5u64 {
        let state = common::random_state(2, &mut rng);
        let mut counts = [0usize; 4];
        for shot in 0..10_000u64 {
            let outcome = measure_all(&state, acsim::rng::derive_seed(s, shot));
            counts[usize::from_str_radix(&outcome.bitstring, 2).unwrap()] += 1;
        }
        let chi2: f64 = (0..4)
            .map(|i| {
                let expected = 1e4 * probability(&state, &format_label(2, i)).unwrap();
                (counts[i] as f64 - expected).powi(2) / expected
            })
            .sum();
        assert!(
            chi2 < CHI2_3DOF_001,
            "state {s}: chi2 {chi2} counts {counts:?}"
        );
    }
}
