use num_complex::Complex64;
use qalb_core::engine::*;
use qalb_core::fock::*;
use qalb_core::lattice::{build_lattice, LatticeKind};
use qalb_core::operator::{embed, DenseOperator, I, ONE};
use rand::{Rng, SeedableRng};

fn setup(qc: usize) -> CollisionSetup {
    CollisionSetup::new(
        build_lattice(LatticeKind::D1Q3),
        FockConfig::from_qubits(qc).unwrap(),
        1.0,
        1e-3,
    )
    .unwrap()
}

#[test]
fn rest_component_matches_closed_form() {
    // Omega_rest = -(1/tau)(q_rest + (q_east - q_west)^2 - 2/3).
    let s = setup(2);
    let (q, _) = position_momentum(s.cfg);
    let q0 = embed(&q, 0, 3);
    let u = embed(&q, 2, 3).sub(&embed(&q, 1, 3)).unwrap();
    let want = q0
        .add(&u.matmul(&u).unwrap())
        .unwrap()
        .sub(&DenseOperator::identity(64).scale(Complex64::new(2.0 / 3.0, 0.0)))
        .unwrap()
        .scale(-ONE);
    assert!(omega_operator(&s, 0).max_abs_diff(&want) < 1e-14);
}

#[test]
fn hamiltonian_properties() {
    let s = setup(2);
    let h = hamiltonian_nonhermitian(&s);
    assert_eq!(h.dim(), 64);
    assert!(h.hermiticity_defect() > 1e-3);
    let (hh, div) = hamiltonian_hermitized(&s);
    assert!(hh.hermiticity_defect() <= 1e-13);
    assert_eq!(div, -2.0);
    // Anti-Hermitian part of H is (H - H')
    let anti = h.sub(&hh).unwrap();
    assert!(anti.add(&anti.dagger()).unwrap().max_abs() < 1e-13);
    // p and Omega do not commute.
    let (_, p) = position_momentum(s.cfg);
    let p0 = embed(&p, 0, 3);
    let om = omega_operator(&s, 0);
    let c = p0.matmul(&om).unwrap().sub(&om.matmul(&p0).unwrap()).unwrap();
    assert!(c.max_abs() > 1e-3);
}

#[test]
fn divergence_by_lattice() {
    for (kind, tau, want) in [
        (LatticeKind::D1Q3, 1.0, -2.0),
        (LatticeKind::D2Q9, 2.0, -3.5),
        (LatticeKind::D3Q27, 1.0, -24.0),
    ] {
        let m = build_lattice::<f64>(kind);
        assert_eq!(divergence(m.q, m.dim, tau), want);
    }
    // D2Q9 operators exist at one qubit per mode.
    let s = CollisionSetup::new(build_lattice(LatticeKind::D2Q9), FockConfig::from_qubits(1).unwrap(), 2.0, 1e-3).unwrap();
    let (h, div) = hamiltonian_hermitized(&s);
    assert_eq!(h.dim(), 512);
    assert_eq!(div, -3.5);
}

#[test]
fn anti_hermitian_part_is_half_divergence() {
    // Untruncated, H - H' = -(i/2) div. The vacuum entry sees no truncation.
    let s = setup(3);
    let h = hamiltonian_nonhermitian(&s);
    let (hh, div) = hamiltonian_hermitized(&s);
    let anti = h.sub(&hh).unwrap();
    assert!((anti.get(0, 0) - I * (-0.5 * div)).norm() < 1e-12);
}

#[test]
fn equilibrium_drift_is_truncation_leakage() {
    // Omega vanishes at equilibrium; motion comes only from the top Fock level
    // and shrinks as the truncation grows.
    let feq = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
    let drift = |qc: usize, steps: usize| {
        let r = evolve_quantum_0d(&setup(qc), &feq, steps, &EvolveOptions::default()).unwrap();
        r.decoded[steps].iter().zip(&feq).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    assert!(drift(3, 1) < 1e-8);
    assert!(drift(3, 50) < drift(2, 50) / 10.0);
}

#[test]
fn omega_mass_conservation_on_encoded_states() {
    // sum_i Omega_i = (1/tau)(1 - sum_i q_i), which annihilates a unit-mass
    // encoded state away from the top occupation level of every mode.
    let s = setup(3);
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let total = (0..3)
        .map(|i| omega_operator(&s, i))
        .reduce(|a, b| a.add(&b).unwrap())
        .unwrap();
    let enc = Encoding::Eigenstate(HermiteConvention::Physicists);
    let d = s.cfg.dim();
    for _ in 0..10 {
        let mut f: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
        let sum: f64 = f.iter().sum();
        f.iter_mut().for_each(|x| *x /= sum);
        let psi = encode_register(&s, &f, enc).unwrap();
        let out = total.apply(&psi).unwrap();
        for (idx, z) in out.iter().enumerate() {
            let occ = [idx / (d * d), (idx / d) % d, idx % d];
            if occ.iter().all(|&n| n < s.cfg.n) {
                assert!(z.norm() < 1e-13, "{idx}: {z}");
            }
        }
    }
}

#[test]
fn hermitized_preserves_norm() {
    for qc in [2, 3] {
        let s = setup(qc);
        let f0 = [2.0 / 3.0, 1.0 / 12.0, 0.25];
        let r = evolve_quantum_0d(&s, &f0, 100, &EvolveOptions::default()).unwrap();
        assert!(r.norms.iter().all(|n| (n - 1.0).abs() < 1e-9));
        assert!(r.max_norm_step_change() < 1e-9);
        assert!((r.corrected_norms[100] - dissipation_factor(100, 1e-3, 1.0, 3, 1)).abs() < 1e-9);
    }
}

#[test]
fn hermitized_tracks_nonhermitian_at_small_dt() {
    let s = setup(3);
    let f0 = [2.0 / 3.0, 1.0 / 12.0, 0.25];
    let h = evolve_quantum_0d(&s, &f0, 100, &EvolveOptions::default()).unwrap();
    let nh = evolve_quantum_0d(
        &s,
        &f0,
        100,
        &EvolveOptions {
            method: Method::NonHermitian,
            ..Default::default()
        },
    )
    .unwrap();
    for (a, b) in h.decoded[100].iter().zip(&nh.decoded[100]) {
        assert!((a - b).abs() / b.abs() < 0.01);
    }
}

#[test]
fn both_methods_start_from_the_same_state() {
    let s = setup(2);
    let f0 = [0.5, 0.25, 0.25];
    let opts = EvolveOptions::default();
    let a = evolve_quantum_0d(&s, &f0, 0, &opts).unwrap();
    let b = evolve_quantum_0d(&s, &f0, 0, &EvolveOptions { method: Method::NonHermitian, ..opts }).unwrap();
    assert_eq!(a.decoded, b.decoded);
    assert_eq!(a.relative_errors[0], vec![0.0; 3]);
}

#[test]
fn translation_initialization_runs() {
    let s = setup(2);
    let f0 = [0.5, 0.25, 0.25];
    let opts = EvolveOptions {
        encoding: Encoding::Translation,
        ..Default::default()
    };
    let r = evolve_quantum_0d(&s, &f0, 10, &opts).unwrap();
    assert_eq!(r.times.len(), 11);
    assert!(r.decoded.iter().flatten().all(|x| x.is_finite()));
}

#[test]
fn invalid_initial_mass() {
    let s = setup(1);
    assert!(evolve_quantum_0d(&s, &[0.5, 0.5, 0.5], 1, &EvolveOptions::default()).is_err());
}

#[test]
fn dense_and_action_propagators_agree() {
    let s = setup(2);
    let h = hamiltonian_nonhermitian(&s);
    let a = Propagator::new(&h, 1e-3, Propagation::Dense).unwrap();
    let b = Propagator::new(&h, 1e-3, Propagation::Action).unwrap();
    let v = encode_register(&s, &[0.5, 0.25, 0.25], Encoding::Eigenstate(HermiteConvention::Monic)).unwrap();
    let x = a.apply(&v).unwrap();
    let y = b.apply(&v).unwrap();
    for (p, q) in x.iter().zip(&y) {
        assert!((p - q).norm() < 1e-13);
    }
}
