//! Seeded random sweeps held against independent oracles: closed-form
//! propagators for the integrator, analytic integrals for the quadrature,
//! and the direct DFT for the fast transform routes.

use num_complex::Complex64;
use osim_core::fourier::{
    dft_direct, fft_radix2, qft_apply, qft_build_circuit, stage_factorization,
    verify_factorization, SpectrumVector,
};
use osim_core::lti::{evolve_rk4, propagator_closed_form, TimeGrid, TwoLevelHamiltonian, TwoLevelState};
use osim_core::signal::{decode, encode, EncodingConfig, QuadratureRule};
use osim_core::state::{givens_rotation, new_obit, normalize_complex, normalize_real, OrthogonalGate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(rng: &mut ChaCha8Rng) -> TwoLevelHamiltonian {
    // bounded so the spectral norm stays below 5
    let a = rng.gen_range(-1.5..1.5);
    let b = rng.gen_range(-1.5..1.5);
    let c = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    TwoLevelHamiltonian::new(
        Complex64::new(a, 0.0),
        c,
        c.conj(),
        Complex64::new(b, 0.0),
    )
    .unwrap()
}

fn random_unit_state(rng: &mut ChaCha8Rng) -> TwoLevelState {
    let raw = [
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    ];
    let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    TwoLevelState::new(raw[0] / norm, raw[1] / norm).unwrap()
}

/// Product of seeded plane rotations: orthogonal by construction.
fn random_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> OrthogonalGate {
    let mut m = OrthogonalGate::identity(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let g = givens_rotation(dim, i, j, rng.gen_range(0.0..std::f64::consts::TAU)).unwrap();
            let mut rotated = vec![0.0; dim * dim];
            for col in 0..dim {
                let column: Vec<f64> = (0..dim).map(|r| m.entry(r, col)).collect();
                let out = g.apply_raw(&column).unwrap();
                for r in 0..dim {
                    rotated[r * dim + col] = out[r];
                }
            }
            m = OrthogonalGate::new(dim, rotated).unwrap();
        }
    }
    m
}

#[test]
fn propagator_unitarity_over_seeded_hamiltonians() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let h = random_hermitian(&mut rng);
        assert!(h.spectral_norm() <= 5.0);
        let t = rng.gen_range(-10.0..10.0);
        let u = propagator_closed_form(&h, t);
        assert!(u.unitarity_deviation() <= 1e-12);
    }
}

#[test]
fn probability_conservation_along_closed_form_trajectories() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..50 {
        let h = random_hermitian(&mut rng);
        let s0 = random_unit_state(&mut rng);
        for step in 0..20 {
            let u = propagator_closed_form(&h, 0.5 * step as f64);
            let s = u.apply(&s0);
            assert!((s.norm_sq() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn rk4_tracks_closed_form_over_seeded_hamiltonians() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut max_err: f64 = 0.0;
    for _ in 0..25 {
        let h = random_hermitian(&mut rng);
        let s0 = random_unit_state(&mut rng);
        let t: f64 = rng.gen_range(0.5..10.0);
        let steps = (t / 1e-3).ceil() as usize;
        let grid = TimeGrid::new(0.0, t / steps as f64, steps).unwrap();
        let traj = evolve_rk4(&h, &s0, &grid).unwrap();
        let last = traj.last().unwrap();
        let exact = propagator_closed_form(&h, t).apply(&s0);
        let err = (last.c1 - exact.c1).norm().max((last.c2 - exact.c2).norm());
        max_err = max_err.max(err);
    }
    assert!(max_err <= 1e-5, "max error {max_err}");
}

#[test]
fn rk4_error_scales_as_dt_fourth() {
    let h = TwoLevelHamiltonian::sigma_x();
    let s0 = TwoLevelState::basis(0).unwrap();
    let t = 2.0;
    let exact = propagator_closed_form(&h, t).apply(&s0);
    let error_at = |dt: f64| {
        let steps = (t / dt).round() as usize;
        let grid = TimeGrid::new(0.0, t / steps as f64, steps).unwrap();
        let last = *evolve_rk4(&h, &s0, &grid).unwrap().last().unwrap();
        (last.c1 - exact.c1).norm().max((last.c2 - exact.c2).norm())
    };
    let (e0, e1, e2) = (error_at(0.1), error_at(0.05), error_at(0.025));
    let (r1, r2) = (e0 / e1, e1 / e2);
    assert!((12.0..=20.0).contains(&r1), "ratio {r1} at first halving");
    assert!((12.0..=20.0).contains(&r2), "ratio {r2} at second halving");
}

#[test]
fn random_orthogonal_gates_preserve_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..100 {
        let dim = 1usize << rng.gen_range(1..4);
        let gate = random_orthogonal(&mut rng, dim);
        assert!(gate.orthogonality_deviation() <= 1e-10);
        let raw: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = normalize_real(&raw).unwrap();
        let out = gate.apply(&s).unwrap();
        let norm_sq: f64 = out.amplitudes().iter().map(|a| a * a).sum();
        assert!((norm_sq - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn encode_decode_round_trip_over_seeded_obits() {
    let cfg = EncodingConfig::new(256, QuadratureRule::Trapezoid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = new_obit(theta.cos(), theta.sin()).unwrap();
        let back = decode(&encode(&s, &cfg).unwrap(), &cfg).unwrap();
        let err = (back.amplitudes()[0] - s.amplitudes()[0])
            .hypot(back.amplitudes()[1] - s.amplitudes()[1]);
        worst = worst.max(err);
    }
    assert!(worst <= 1e-9, "worst recovery error {worst}");
}

#[test]
fn four_way_equivalence_on_seeded_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for n in 1..=8usize {
        let circuit = qft_build_circuit(n).unwrap();
        let factorization = stage_factorization(n).unwrap();
        assert!(verify_factorization(&factorization) <= 1e-10);
        for _ in 0..20 {
            let raw: Vec<Complex64> = (0..1usize << n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let s = normalize_complex(&raw).unwrap();
            let x = SpectrumVector::from_state(&s);
            let oracle = dft_direct(&x);
            assert!(oracle.inf_distance(&fft_radix2(&x)) <= 1e-10);
            let via_qft = SpectrumVector::from_state(&qft_apply(&circuit, &s).unwrap());
            assert!(oracle.inf_distance(&via_qft) <= 1e-10);
            let via_stages = factorization.apply(&x).unwrap();
            assert!(oracle.inf_distance(&via_stages) <= 1e-10);
            // unitary convention: all routes preserve the norm
            assert!((oracle.norm() - x.norm()).abs() <= 1e-10);
        }
    }
}
