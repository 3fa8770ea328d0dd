use kuo_core::damping::{
    default_sample_times, evolve_exact, evolve_rk4, rk4_phase_order, run_damping_experiment,
    ModeEnsemble, ModeState,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn modulus_drift_over_long_run() {
    for beta in [1.0, 5.0] {
        let table = run_damping_experiment(&ModeEnsemble::gaussian(), beta, 100.0, 1e-2, &default_sample_times(100.0)).unwrap();
        let worst = table.column("max_drift").unwrap().into_iter().fold(0.0, f64::max);
        println!("beta={beta} drift={worst:e}");
        assert!(worst <= 1e-8);
    }
}

#[test]
fn rk4_is_fourth_order() {
    let m = ModeState { k: 1, eta: 5.0, amp: Complex64::new(1.0, 0.0) };
    let (errors, order) = rk4_phase_order(m, 5.0, 20.0, &[4e-2, 2e-2, 1e-2, 5e-3]).unwrap();
    println!("errors {errors:?} order {order}");
    assert!((3.7..=4.3).contains(&order));
}

#[test]
fn decay_exponents() {
    for ens in [ModeEnsemble::gaussian(), ModeEnsemble::compact()] {
        let table = run_damping_experiment(&ens, 1.0, 100.0, 1e-2, &default_sample_times(100.0)).unwrap();
        let ux: f64 = table.meta_value("ux_exponent").unwrap().parse().unwrap();
        let uy: f64 = table.meta_value("uy_exponent").unwrap().parse().unwrap();
        println!("ux {ux} uy {uy}");
        assert!((-1.3..=-0.7).contains(&ux));
        assert!((-2.3..=-1.7).contains(&uy));
    }
}

#[test]
fn norms_do_not_depend_on_beta() {
    // RK4 shrinks |f| by about (ω dt)^6/144 per step; at dt = 1e-2 and β = 5
    // that alone moves the norms by ~2e-9, so compare at dt = 5e-3.
    let dt = 5e-3;
    let times = default_sample_times(100.0);
    let base = run_damping_experiment(&ModeEnsemble::gaussian(), 0.0, 100.0, dt, &times).unwrap();
    for beta in [1.0, 5.0] {
        let other = run_damping_experiment(&ModeEnsemble::gaussian(), beta, 100.0, dt, &times).unwrap();
        let mut worst: f64 = 0.0;
        for (a, b) in base.rows.iter().zip(&other.rows) {
            worst = worst.max((a[1] - b[1]).abs()).max((a[2] - b[2]).abs());
        }
        println!("beta={beta} worst norm difference {worst:e}");
        assert!(worst <= 1e-9);
    }
}

#[test]
fn orr_peak_at_critical_time() {
    let (k, eta) = (2, 7.0);
    let m = ModeState { k, eta, amp: Complex64::new(1.0, 0.0) };
    let step = 1e-3;
    let (mut best_t, mut best) = (0.0, 0.0);
    for i in 0..=10_000 {
        let t = i as f64 * step;
        let v = m.velocity(t).1.norm();
        if v > best {
            best = v;
            best_t = t;
        }
    }
    assert!((best_t - eta / k as f64).abs() <= step);
}

#[test]
fn rk4_matches_closed_form_for_random_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let k = *[-3, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
        let m = ModeState {
            k,
            eta: rng.gen_range(-20.0..20.0),
            amp: Complex64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..std::f64::consts::TAU)),
        };
        let beta = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(1.0..30.0);
        let num = evolve_rk4(m, beta, 0.0, t, 1e-3).unwrap().amp;
        let exact = evolve_exact(m, beta, t).unwrap().amp;
        assert!((num - exact).norm() <= 1e-8);
    }
}

#[test]
fn evolution_preserves_conjugate_symmetry() {
    let ens = ModeEnsemble::compact();
    let mut later = ens.clone();
    for m in &mut later.modes {
        *m = evolve_rk4(*m, 2.0, 0.0, 3.0, 1e-2).unwrap();
    }
    later.check_conjugate_symmetry().unwrap();
}
