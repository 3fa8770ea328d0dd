use kuo_core::grid::{assemble, Grid1D, TridiagOperator};
use kuo_core::tridiag::{nth_eigenvalue, sturm_count, BISECTION_TOL};
use kuo_core::rayleigh_quotient;
use proptest::prelude::*;

fn operator(diag: Vec<f64>, off: Vec<f64>) -> TridiagOperator {
    TridiagOperator::from_parts(diag, off).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-5.0..5.0f64, n - 1),
        )
    })
}

// Jacobi rotations on a dense copy: an independent eigenvalue oracle.
fn jacobi_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
        if i + 1 < n {
            a[i][i + 1] = off[i];
            a[i + 1][i] = off[i];
        }
    }
    for _ in 0..100 {
        let mut off_norm = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off_norm += a[p][q] * a[p][q];
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
        if off_norm < 1e-30 {
            break;
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

proptest! {
    #[test]
    fn sturm_count_is_monotone((diag, off) in small_matrix(), x in -30.0..30.0f64, dx in 0.0..5.0f64) {
        let op = operator(diag, off);
        prop_assert!(sturm_count(&op, x) <= sturm_count(&op, x + dx));
    }

    #[test]
    fn bisection_matches_dense_oracle((diag, off) in small_matrix()) {
        let oracle = jacobi_eigenvalues(&diag, &off);
        let op = operator(diag, off);
        for (j, ev) in oracle.iter().enumerate() {
            let got = nth_eigenvalue(&op, j + 1, BISECTION_TOL).unwrap();
            prop_assert!((got - ev).abs() < 1e-9, "j={} got={} oracle={}", j + 1, got, ev);
        }
    }

    #[test]
    fn shift_moves_spectrum((diag, off) in small_matrix(), shift in -5.0..5.0f64) {
        let n = diag.len();
        let shifted = operator(diag.iter().map(|d| d + shift).collect(), off.clone());
        let op = operator(diag, off);
        for j in 1..=n {
            let a = nth_eigenvalue(&op, j, BISECTION_TOL).unwrap();
            let b = nth_eigenvalue(&shifted, j, BISECTION_TOL).unwrap();
            prop_assert!((b - a - shift).abs() < 1e-9);
        }
    }

    #[test]
    fn assembly_is_affine_in_potential(a in -3.0..3.0f64, b in -3.0..3.0f64, n in 3usize..40) {
        let grid = Grid1D::uniform(n).unwrap();
        let p = |y: f64| y.sin();
        let q = |y: f64| y * y;
        let zero = assemble(&grid, |_| 0.0).unwrap();
        let op_p = assemble(&grid, p).unwrap();
        let op_q = assemble(&grid, q).unwrap();
        let op = assemble(&grid, |y| a * p(y) + b * q(y)).unwrap();
        for i in 0..n {
            let expect = zero.diag[i] + a * (op_p.diag[i] - zero.diag[i]) + b * (op_q.diag[i] - zero.diag[i]);
            prop_assert!((op.diag[i] - expect).abs() < 1e-9 * zero.diag[i].abs());
        }
        prop_assert_eq!(&op.off, &zero.off);
    }

    #[test]
    fn rayleigh_quotient_bounds_ground_state(coeffs in prop::collection::vec(-1.0..1.0f64, 1..5), amp in 0.0..20.0f64) {
        prop_assume!(coeffs.iter().any(|c| c.abs() > 1e-3));
        let grid = Grid1D::uniform(63).unwrap();
        let pot = |y: f64| amp * (2.0 * y).cos();
        let v: Vec<f64> = grid.nodes().iter().map(|&y| {
            coeffs.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * std::f64::consts::PI * (y + 1.0) / 2.0).sin()).sum()
        }).collect();
        let rq = rayleigh_quotient(&grid, pot, &v).unwrap();
        let l1 = nth_eigenvalue(&assemble(&grid, pot).unwrap(), 1, BISECTION_TOL).unwrap();
        prop_assert!(rq >= l1 - 1e-9);
    }

}
