use std::f64::consts::PI;

use kuo_core::rayleigh_kuo::{
    default_eps_schedule, lambda_1_singular, lambda_n_regular, RayleighKuoSpec, Side,
};

// Near a wall where u = c the potential is -beta/(y+1), so for large beta the
// ground state localises and approaches the hydrogen value -beta^2/4.
#[test]
fn large_beta_approaches_hydrogen_ground_state() {
    for beta in [12.0, 16.0] {
        let s = lambda_1_singular(beta, Side::Left, &default_eps_schedule(), 512).unwrap();
        let exact = -beta * beta / 4.0;
        assert!((s.value() - exact).abs() < 1e-4 * exact.abs(), "beta={beta}: {} vs {exact}", s.value());
    }
}

#[test]
fn zero_beta_spectrum_is_dirichlet_laplacian() {
    for n in 1..=4 {
        let p = lambda_n_regular(&RayleighKuoSpec::couette(0.0, -3.0), n, 256).unwrap();
        let exact = (n as f64 * PI / 2.0).powi(2);
        assert!((p.value - exact).abs() < 1e-7 * exact, "n={n}: {} vs {exact}", p.value);
    }
}
