use proptest::prelude::*;
use qalb_core::bounds::*;
use qalb_core::complexity::*;
use qalb_core::trunc_hermite::*;
use rand::{Rng, SeedableRng};

#[test]
fn epsilon_n_at_most_one_and_eventually_decreasing() {
    let eps: Vec<f64> = (1..=15).map(epsilon_n).collect();
    assert!(eps.iter().all(|&e| e > 0.0 && e <= 1.0), "{eps:?}");
    for w in eps[4..].windows(2) {
        assert!(w[1] < w[0], "{eps:?}");
    }
}

#[test]
fn epsilon_n_small_cases() {
    // N = 1: He_2(f) = f^2 - 1, scale 1/(2 sqrt 2), sup at f = 0.
    assert!((epsilon_n(1) - 0.5 / 2f64.sqrt()).abs() < 1e-15);
    let (f, _) = epsilon_n_argmax(1);
    assert_eq!(f, 0.0);
}

#[test]
fn completed_square_closes() {
    for q in [3, 9, 27] {
        for v in [BoundVariant::InflateC0, BoundVariant::InflateA] {
            let (c0, c1) = bound_coefficients(q, v).unwrap();
            let (a, b, _) = growth_polynomial(q);
            // Perfect square: 2 C0 C1 equals the linear coefficient.
            assert!((2.0 * c0 * c1 - b).abs() < 1e-9 * b, "Q={q} {v:?}");
            assert!(c1 * c1 >= a - 1e-9);
        }
    }
    // Direct discriminant at Q = 3.
    let (a, b, c) = growth_polynomial(3);
    assert_eq!(b * b - 4.0 * a * c, 13708.0);
}

#[test]
fn completed_square_dominates() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for v in [BoundVariant::InflateC0, BoundVariant::InflateA] {
        let (c0, c1) = bound_coefficients(3, v).unwrap();
        let (a, b, c) = growth_polynomial(3);
        for _ in 0..100 {
            let x: f64 = rng.random();
            let lhs = (c1 * x + c0).powi(2);
            assert!(lhs >= (a * x * x + b * x + c) * (1.0 - 1e-12));
        }
    }
}

#[test]
fn kappa_roots_solve_quadratic() {
    for r in [0.0, 0.3, 2.0, 17.5] {
        let (p, m) = kappa_roots(r, 1.0, 0.0).unwrap();
        for k in [p, m] {
            assert!((k * k + k - r).abs() < 1e-12);
        }
    }
}

#[test]
fn conjugating_kappa_solves_its_quadratic() {
    let p = ErrorBoundParams::new(1.5, 3.0, 1.0, 1e-4, 0.2).unwrap();
    let (k, r) = (p.k(), p.r());
    let res = k * p.kappa * p.kappa + p.kappa + k * r;
    assert!(res.norm() < 1e-12);
    assert!(p.kappa.re < 0.0);
    let mu = p.mu();
    assert!(mu.im == 0.0 && (0.0..=4.0).contains(&mu.re));
}

fn random_params(rng: &mut impl Rng) -> ErrorBoundParams {
    let c0 = rng.random_range(0.1..5.0);
    let c1 = rng.random_range(0.5..20.0);
    let tau = rng.random_range(0.5..2.0);
    let dt = 10f64.powf(rng.random_range(-7.0..-3.0));
    let eps = rng.random_range(0.0..0.5);
    ErrorBoundParams::new(c0, c1, tau, dt, eps).unwrap()
}

#[test]
fn dual_path_agreement() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let run = logistic_map_run(&p, 20);
        let raw = raw_recurrence(&p, 20);
        assert!(run.diverged_at.is_none());
        for t in 0..=20 {
            assert!((run.eps[t] - raw[t]).abs() <= 1e-10, "{p:?} t={t}");
            assert!(run.eps_imag[t].abs() <= 1e-10);
        }
    }
}

#[test]
fn complex_kappa_still_recovers_recurrence() {
    // Large dt: 4 k^2 r > 1, the conjugation runs through complex numbers.
    let p = ErrorBoundParams::new(2.0, 3.0, 1.0, 0.05, 0.1).unwrap();
    assert!(p.kappa.im != 0.0);
    let run = logistic_map_run(&p, 3);
    let raw = raw_recurrence(&p, 3);
    for t in 0..run.eps.len() {
        assert!((run.eps[t] - raw[t]).abs() <= 1e-9 * raw[t].max(1.0));
        assert!(run.eps_imag[t].abs() <= 1e-9 * raw[t].max(1.0));
    }
}

#[test]
fn divergence_is_reported() {
    let p = ErrorBoundParams::new(2.0, 30.0, 1.0, 0.5, 0.5).unwrap();
    let run = logistic_map_run(&p, 1000);
    let t = run.diverged_at.expect("diverges");
    assert_eq!(run.z.len(), t + 1);
    assert!(run.z[t].norm() > Z_DIVERGENCE);
}

#[test]
fn invalid_params_rejected() {
    assert!(ErrorBoundParams::new(1.0, 0.0, 1.0, 1e-3, 0.1).is_err());
    assert!(ErrorBoundParams::new(1.0, 1.0, 1.0, 1e-3, 1.5).is_err());
    assert!(ErrorBoundParams::new(0.0, 1.0, 1.0, 1e-3, 0.0).is_err());
}

#[test]
fn feasibility_verdicts() {
    for v in [BoundVariant::InflateC0, BoundVariant::InflateA] {
        let (c0, c1) = bound_coefficients(3, v).unwrap();
        let eps = epsilon_n(3);
        assert_eq!(feasibility(c0, c1, 1e-6, 1.0, eps).unwrap().verdict(), "feasible");
        assert_eq!(feasibility(c0, c1, 1.0, 1.0, eps).unwrap().verdict(), "infeasible");
    }
}

#[test]
fn feasibility_margins_monotone_in_dt() {
    let (c0, c1) = bound_coefficients(3, BoundVariant::InflateC0).unwrap();
    let mut prev: Option<Feasibility> = None;
    for i in 0..=60 {
        let dt = 10f64.powf(-6.0 + 0.1 * i as f64);
        let f = feasibility(c0, c1, dt, 1.0, 0.1).unwrap();
        if let Some(p) = prev {
            assert!(f.lower_margin <= p.lower_margin);
            assert!(f.upper_margin <= p.upper_margin);
        }
        prev = Some(f);
    }
}

fn xs() -> Vec<f64> {
    (0..20).map(|i| -0.95 + 0.1 * i as f64).collect()
}

#[test]
fn odd_moments_vanish() {
    let m = moments(1.0, 9).unwrap();
    for k in (1..=9).step_by(2) {
        assert!(m[k].abs() < 1e-15);
    }
    let g = gamma_sequence_oracle(1.0, 1).unwrap();
    assert!((g[1] - m[2] / m[0]).abs() < 1e-14);
}

#[test]
fn large_z_limit() {
    let g = gamma_sequence_oracle(6.0, 5).unwrap();
    for n in 1..=5 {
        assert!((g[n] - n as f64 / 2.0).abs() < 1e-6, "{g:?}");
    }
}

#[test]
fn laguerre_freud_identities_hold() {
    let g = gamma_sequence_oracle(1.0, 10).unwrap();
    assert!(g[1..].iter().all(|&x| x > 0.0));
    let r = gamma_laguerre_freud_check(&g, 1.0).unwrap();
    assert!(r.max() <= 1e-8, "{r:?}");
}

#[test]
fn laguerre_freud_detects_perturbation() {
    let mut g = gamma_sequence_oracle(1.0, 10).unwrap();
    g[4] += 1e-3;
    let r = gamma_laguerre_freud_check(&g, 1.0).unwrap();
    assert!(r.laguerre_freud > 1e-5 && r.g_form > 1e-5, "{r:?}");
}

#[test]
fn orthogonality_and_parity() {
    let b = TruncatedHermiteBasis::new(1.0, 8).unwrap();
    for m in 0..=6 {
        for n in 0..m {
            assert!(inner_product(&b, m, n).unwrap().abs() < 1e-8);
        }
    }
    for &x in &[0.1, 0.37, 0.9, 1.7] {
        for n in 0..=8 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((b.poly_eval(n, -x).0 - sign * b.poly_eval(n, x).0).abs() < 1e-14);
        }
    }
}

#[test]
fn lowering_residuals() {
    let b = TruncatedHermiteBasis::new(1.0, 8).unwrap();
    assert!(lowering_check(&b, 1, &[0.3, -0.7]).unwrap() <= 1e-8);
    for n in 1..=5 {
        let r = lowering_check(&b, n, &xs()).unwrap();
        assert!(r <= 1e-7, "n={n} {r}");
        let neg: Vec<f64> = xs().iter().map(|x| -x).collect();
        assert!((lowering_check(&b, n, &neg).unwrap() - r).abs() < 1e-12);
    }
    assert!(lowering_check(&b, 0, &xs()).is_err());
}

#[test]
fn differential_recurrence_residuals() {
    let b = TruncatedHermiteBasis::new(1.0, 8).unwrap();
    let pts: Vec<f64> = (0..10).map(|i| -0.9 + 0.2 * i as f64).collect();
    for n in 2..=6 {
        assert!(diff_recurrence_check(&b, n, &pts).unwrap() <= 1e-7);
        assert!(tau_coeff(&b.gammas, n) > 0.0);
    }
    let clean = diff_recurrence_check(&b, 2, &pts).unwrap();
    let mut g = b.gammas.clone();
    g[3] += 1e-3;
    let bumped = diff_recurrence_check(&TruncatedHermiteBasis::from_gammas(1.0, g), 2, &pts).unwrap();
    assert!(bumped > 1e3 * clean.max(1e-15));
}

fn inputs() -> ComplexityInputs {
    ComplexityInputs {
        g: 256.0,
        d: 2,
        t: 10.0,
        q: 9,
        tau: 1.0,
        b: 6.0,
        n: 3,
    }
}

#[test]
fn lcu_examples() {
    let p = lcu_collision_params(3, 3, 1.0);
    assert_eq!((p.m, p.l, p.s2), (17, 68, 0.0));
    let p9 = lcu_collision_params(9, 7, 2.0);
    assert_eq!(p9.m, 101);
    assert_eq!(p9.l, 101 * 9);
    assert_eq!(p9.s2, 9.0 * 9.0 / 2.0);
}

#[test]
fn complexity_table() {
    let inp = inputs();
    let rows = complexity_rows(&inp).unwrap();
    let labels: Vec<_> = rows.iter().map(|r| r.label).collect();
    assert_eq!(labels, ["X*", "X**", "X***", "X", "X & X*", "X & X***", "X & non-unitary"]);
    assert!(rows.iter().all(|r| r.qubits.is_finite() && r.gates.is_finite() && r.gates_with_log >= r.gates));
    let (g, d, t, q) = (inp.g, inp.d as f64, inp.t, inp.q as f64);
    let x2 = &rows[1];
    assert_eq!(x2.qubits, (q * g).log2() + 2.0 * d);
    assert_eq!(x2.gates, t * d * g.log2().powi(2));
    let combo = &rows[4];
    let want = t * q * q * d * d * g.log2().ceil().powi(2) + t.powi(5) * q.powi(5);
    assert!((combo.gates - want).abs() <= 1e-12 * want);
    // Binary streaming is the cheapest in qubits.
    assert!(rows.iter().all(|r| r.qubits >= x2.qubits));
}

#[test]
fn reynolds_qubits() {
    assert_eq!(qubits_for_reynolds(1e8).unwrap(), 60.0);
    assert_eq!(qubits_for_reynolds(1e20).unwrap(), 150.0);
    assert_ne!(qubits_for_reynolds(1e20).unwrap(), QUOTED_QUBITS_RE20);
}

proptest! {
    #[test]
    fn rows_grow_with_volume_and_time(g in 4.0f64..1e6, t in 1.0f64..100.0) {
        let base = ComplexityInputs { g, t, ..inputs() };
        let a = complexity_rows(&base).unwrap();
        let b = complexity_rows(&ComplexityInputs { g: 2.0 * g, t: t + 1.0, ..base }).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(y.gates >= x.gates);
            prop_assert!(y.qubits >= x.qubits);
        }
    }

    #[test]
    fn recurrence_is_nonnegative(c0 in 0.1f64..5.0, c1 in 0.5f64..20.0, e in 0.0f64..1.0) {
        let p = ErrorBoundParams::new(c0, c1, 1.0, 1e-5, e).unwrap();
        let raw = raw_recurrence(&p, 10);
        prop_assert!(raw.windows(2).all(|w| w[1] >= w[0] && w[1] >= 0.0));
        prop_assert_eq!(logistic_map_run(&p, 0).z[0], p.z0);
    }
}
