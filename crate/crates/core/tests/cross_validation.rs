//! Cross-checks between the hand-coded component equations, the dense-matrix
//! reference route, and closed-form special cases.

use qmix_core::{
    commutator_rhs, heun_step, pauli_decompose, propagate_piecewise_constant,
    reconstruct_density_matrix, rhs, run, tensor_from_product, BiHarmonicDrive, BlochTensor,
    BlochVector, DenseState, IntegratorKind, SimulationConfig, SystemParams,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_tensor(rng: &mut StdRng) -> BlochTensor {
    BlochTensor::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

fn random_coherent_params(rng: &mut StdRng) -> SystemParams {
    SystemParams {
        delta1: rng.gen_range(0.1..3.0),
        delta2: rng.gen_range(0.1..3.0),
        g: rng.gen_range(-2.0..2.0),
        gamma_phi1: 0.0,
        gamma_phi2: 0.0,
        gamma_r1: 0.0,
        gamma_r2: 0.0,
        z_t1: rng.gen_range(-1.0..1.0),
        z_t2: rng.gen_range(-1.0..1.0),
    }
}

fn random_drive(rng: &mut StdRng) -> BiHarmonicDrive {
    BiHarmonicDrive {
        a1: rng.gen_range(0.0..10.0),
        a2: rng.gen_range(0.0..10.0),
        omega1: rng.gen_range(0.1..5.0),
        omega2: rng.gen_range(0.1..5.0),
        phi: rng.gen_range(0.0..std::f64::consts::TAU),
    }
}

fn max_component_diff(a: &BlochTensor, b: &BlochTensor) -> f64 {
    a.to_array()
        .iter()
        .zip(b.to_array())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max)
}

#[test]
fn coherent_rhs_matches_dense_commutator() {
    let mut rng = StdRng::seed_from_u64(0x1b50c);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let state = random_tensor(&mut rng);
        let params = random_coherent_params(&mut rng);
        let drive = random_drive(&mut rng);
        let t = rng.gen_range(0.0..10.0);

        let fast = rhs(t, &state, &params, &drive);
        let dense = DenseState::new(reconstruct_density_matrix(&state)).unwrap();
        let (_, reference) =
            pauli_decompose(&commutator_rhs(t, &dense, &params, &drive)).unwrap();

        let scale = reference.max_abs().max(1.0);
        let resid = max_component_diff(&fast, &reference) / scale;
        worst = worst.max(resid);
    }
    assert!(worst < 1e-12, "worst relative residual {worst:e}");
}

#[test]
fn damping_follows_the_rate_pattern() {
    // With all coherent couplings off, each component must decay with the
    // sum of the rates attached to its two indices (dephasing for x/y,
    // relaxation for z, nothing for the identity slot), and the only affine
    // offsets are the equilibrium pulls on the three z-type components.
    let mut rng = StdRng::seed_from_u64(0xda3b);
    let quiet = BiHarmonicDrive { a1: 0.0, a2: 0.0, omega1: 1.0, omega2: 1.0, phi: 0.0 };
    for _ in 0..200 {
        let params = SystemParams {
            delta1: 0.0,
            delta2: 0.0,
            g: 0.0,
            gamma_phi1: rng.gen_range(0.0..0.5),
            gamma_phi2: rng.gen_range(0.0..0.5),
            gamma_r1: rng.gen_range(0.0..0.5),
            gamma_r2: rng.gen_range(0.0..0.5),
            z_t1: rng.gen_range(-1.0..1.0),
            z_t2: rng.gen_range(-1.0..1.0),
        };
        let state = random_tensor(&mut rng);
        let dot = rhs(0.0, &state, &params, &quiet);

        let rate1 = |axis: char| match axis {
            'x' | 'y' => params.gamma_phi1,
            'z' => params.gamma_r1,
            _ => 0.0,
        };
        let rate2 = |axis: char| match axis {
            'x' | 'y' => params.gamma_phi2,
            'z' => params.gamma_r2,
            _ => 0.0,
        };
        let names = ["ox", "oy", "oz", "xo", "xx", "xy", "xz", "yo", "yx", "yy", "yz", "zo",
            "zx", "zy", "zz"];
        for (i, name) in names.iter().enumerate() {
            let (a, b) = (name.as_bytes()[0] as char, name.as_bytes()[1] as char);
            let decay = rate1(if a == 'o' { '0' } else { a }) + rate2(if b == 'o' { '0' } else { b });
            let offset = match *name {
                "oz" => params.gamma_r2 * params.z_t2,
                "zo" => params.gamma_r1 * params.z_t1,
                "zz" => (params.gamma_r1 + params.gamma_r2) * params.z_t1 * params.z_t2,
                _ => 0.0,
            };
            let expected = -decay * state.to_array()[i] + offset;
            let got = dot.to_array()[i];
            assert!(
                (got - expected).abs() < 1e-14,
                "component {name}: got {got}, expected {expected}"
            );
        }
    }
}

#[test]
fn rhs_is_affine_linear_in_the_state() {
    let mut rng = StdRng::seed_from_u64(0xaff1);
    for _ in 0..200 {
        let mut params = random_coherent_params(&mut rng);
        params.gamma_phi1 = rng.gen_range(0.0..0.3);
        params.gamma_phi2 = rng.gen_range(0.0..0.3);
        params.gamma_r1 = rng.gen_range(0.0..0.3);
        params.gamma_r2 = rng.gen_range(0.0..0.3);
        let drive = random_drive(&mut rng);
        let t = rng.gen_range(0.0..10.0);
        let s1 = random_tensor(&mut rng);
        let s2 = random_tensor(&mut rng);

        let sum = BlochTensor::from_array(std::array::from_fn(|i| {
            s1.to_array()[i] + s2.to_array()[i]
        }));
        let lhs = rhs(t, &sum, &params, &drive).to_array();
        let zero_offset = rhs(t, &BlochTensor::ZERO, &params, &drive).to_array();
        let r1 = rhs(t, &s1, &params, &drive).to_array();
        let r2 = rhs(t, &s2, &params, &drive).to_array();
        for i in 0..15 {
            let affine = r1[i] + r2[i] - zero_offset[i];
            assert!(
                (lhs[i] - affine).abs() < 1e-12,
                "affine linearity violated at component {i}"
            );
        }
    }
}

#[test]
fn qubit_swap_commutes_with_rhs() {
    // Exchanging the two qubits (parameters and drives) and transposing the
    // tensor must commute with the equations of motion. Drives are compared
    // at phi = 0 so that the swapped pair is expressible in the same form.
    let mut rng = StdRng::seed_from_u64(0x5a9);
    for _ in 0..300 {
        let params = SystemParams {
            delta1: rng.gen_range(0.1..3.0),
            delta2: rng.gen_range(0.1..3.0),
            g: rng.gen_range(-2.0..2.0),
            gamma_phi1: rng.gen_range(0.0..0.3),
            gamma_phi2: rng.gen_range(0.0..0.3),
            gamma_r1: rng.gen_range(0.0..0.3),
            gamma_r2: rng.gen_range(0.0..0.3),
            z_t1: rng.gen_range(-1.0..1.0),
            z_t2: rng.gen_range(-1.0..1.0),
        };
        let swapped = SystemParams {
            delta1: params.delta2,
            delta2: params.delta1,
            g: params.g,
            gamma_phi1: params.gamma_phi2,
            gamma_phi2: params.gamma_phi1,
            gamma_r1: params.gamma_r2,
            gamma_r2: params.gamma_r1,
            z_t1: params.z_t2,
            z_t2: params.z_t1,
        };
        let mut drive = random_drive(&mut rng);
        drive.phi = 0.0;
        let swapped_drive = BiHarmonicDrive {
            a1: drive.a2,
            a2: drive.a1,
            omega1: drive.omega2,
            omega2: drive.omega1,
            phi: 0.0,
        };
        let state = random_tensor(&mut rng);
        let t = rng.gen_range(0.0..10.0);

        let direct = rhs(t, &state, &params, &drive).transposed();
        let via_swap = rhs(t, &state.transposed(), &swapped, &swapped_drive);
        assert!(
            max_component_diff(&direct, &via_swap) < 1e-13,
            "swap symmetry violated"
        );
    }
}

#[test]
fn pauli_round_trip_is_the_identity() {
    let mut rng = StdRng::seed_from_u64(0x707);
    for _ in 0..500 {
        let state = random_tensor(&mut rng);
        let rho = reconstruct_density_matrix(&state);
        let (pi00, back) = pauli_decompose(&rho).unwrap();
        assert!((pi00 - 1.0).abs() < 1e-14);
        assert!(max_component_diff(&state, &back) < 1e-14);
        // normalization is not part of the state, so the reconstructed
        // matrix always carries unit trace
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        assert!(rho.trace().im.abs() < 1e-15);
    }
}

#[test]
fn heun_matches_reference_propagator_on_driven_qubit() {
    // Single driven qubit (no coupling, no damping): the hand-coded system
    // integrated with the trapezoidal scheme against exact midpoint-frozen
    // unitaries on the dense matrix.
    let params = SystemParams::symmetric(1.0, 1.0, 0.0, 0.0, 0.0);
    let drive = BiHarmonicDrive { a1: 2.0, a2: 0.0, omega1: 3.0, omega2: 1.0, phi: 0.0 };
    let q1 = BlochVector::new(1.0, 0.0, 0.0);
    let q2 = BlochVector::new(0.0, 0.0, 1.0);
    let init = tensor_from_product(q1, q2);

    let dt = 1e-4;
    let steps = 10_000; // t = 1
    let mut fast = init;
    let mut dense = DenseState::from_tensor(&init);
    for k in 0..steps {
        let t = k as f64 * dt;
        fast = heun_step(t, &fast, dt, &params, &drive).unwrap();
        dense = propagate_piecewise_constant(&dense, &params, &drive, t, dt);
    }
    let (_, reference) = pauli_decompose(dense.matrix()).unwrap();
    let diff = max_component_diff(&fast, &reference);
    assert!(diff < 1e-6, "max component difference {diff:e}");
}

#[test]
fn uncoupled_spectator_is_independent_of_the_other_drive() {
    // g = 0 decouples the equations: averages of the first-index block
    // (driven by drive 1) cannot depend on the second drive's frequency.
    let params = SystemParams::symmetric(1.0, 0.0, 1e-2, 1e-2, 1.0);
    let sim = SimulationConfig::new(
        IntegratorKind::Heun,
        1e-3,
        5.0,
        50.0,
        1,
        BlochTensor::thermal_product(1.0, 1.0),
    )
    .unwrap();
    let mut reference: Option<(f64, f64)> = None;
    for ratio in [0.7, 1.3, 2.0, 3.1] {
        let drive = BiHarmonicDrive { a1: 3.0, a2: 3.0, omega1: 2.0, omega2: ratio * 2.0, phi: 0.4 };
        let summary = run(&sim, &params, &drive, &mut []).unwrap();
        let block1 = (summary.means.xo, summary.means.zo);
        match reference {
            None => reference = Some(block1),
            Some((x, z)) => {
                assert!((block1.0 - x).abs() < 1e-13, "xo drifted with the scanned drive");
                assert!((block1.1 - z).abs() < 1e-13, "zo drifted with the scanned drive");
            }
        }
    }
}
