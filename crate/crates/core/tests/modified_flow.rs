use kuo_core::modified_flow::{
    b0, c_beta_estimate, default_a_max, lambda1_asymptote, lambda_n_modified, level_set_a,
    ModifiedFlowParams,
};
use kuo_core::KuoError;

fn lambda(beta: f64, gamma: f64, a: f64, n: usize) -> f64 {
    let p = ModifiedFlowParams::new(beta, gamma, a).unwrap();
    lambda_n_modified(p, n, 256).unwrap().value
}

#[test]
fn b0_value() {
    let b = b0();
    println!("b0 = {b:.15}");
    assert!(b < 0.0 && b > -0.1);
}

#[test]
fn positive_below_threshold() {
    for beta in [0.1, 0.3, 0.59] {
        for gamma in [1e-2, 5e-3] {
            let l = lambda(beta, gamma, 0.0, 1);
            assert!(l > 0.0, "beta={beta} gamma={gamma}: {l}");
        }
    }
}

#[test]
fn large_beta_gives_negative_ground_state() {
    assert!(lambda(50.0, 1e-3, 0.0, 1) < 0.0);
}

#[test]
fn second_eigenvalue_positive_for_small_beta() {
    for a in [0.0, 0.5, 1.0] {
        assert!(lambda(0.5, 5e-3, a, 2) > 0.0, "a={a}");
    }
}

#[test]
fn small_gamma_respects_limsup_bound() {
    let beta = 0.5;
    for a in [2.0, 4.0] {
        let bound = lambda1_asymptote(a) + 0.5;
        let l = lambda(beta, 2.5e-3, a, 1);
        assert!(l < bound, "a={a}: {l} vs {bound}");
    }
}

#[test]
fn continuous_in_a() {
    let base = lambda(0.5, 5e-3, 1.0, 1);
    let mut last = f64::INFINITY;
    for delta in [1e-1, 1e-2, 1e-3] {
        let diff = (lambda(0.5, 5e-3, 1.0 + delta, 1) - base).abs();
        assert!(diff < last);
        last = diff;
    }
    assert!(last < 1e-2);
}

#[test]
fn level_set_hits_target() {
    let (beta, gamma) = (0.5, 5e-3);
    let l0 = lambda(beta, gamma, 0.0, 1);
    let a_max = 40.0;
    let tol = 1e-8;
    let d1 = l0 - 0.5;
    let d2 = l0 - 0.05;
    let a1 = level_set_a(beta, gamma, d1, a_max, tol).unwrap();
    let a2 = level_set_a(beta, gamma, d2, a_max, tol).unwrap();
    assert!(a1 > 0.0 && a2 > 0.0 && a2 < a1, "{a1} {a2}");
    assert!((lambda(beta, gamma, a1, 1) - d1).abs() <= tol);
    let r2 = lambda(beta, gamma, a2, 1) - d2;
    assert!(r2.abs() <= tol, "a2={a2} residual={r2}");
}

#[test]
fn level_set_without_bracket_is_reported() {
    let (beta, gamma) = (0.5, 5e-3);
    let l0 = lambda(beta, gamma, 0.0, 1);
    let err = level_set_a(beta, gamma, l0 + 1.0, 1.0, 1e-8).unwrap_err();
    assert!(matches!(err, KuoError::NoBracket(_)));
}

#[test]
fn default_a_max_and_c_beta() {
    assert!(default_a_max(1.0) > 1.0);
    let c = c_beta_estimate(0.5, &[1e-2, 5e-3], 256).unwrap();
    assert!(c > 0.0);
}



