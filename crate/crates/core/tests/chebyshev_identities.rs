mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use sgcrack_core::chebyshev::{
    cauchy_integral_u, cheb_t, cheb_t_trig, cheb_u, compute_influence_integrals, gauss_chebyshev_rule, shifted_t_d1,
    shifted_t_d3, weighted_u_d1, weighted_u_d3,
};
use sgcrack_core::spectral::weighted_u_antiderivative;

use common::{finite_difference, integrate, linspace, principal_value};

fn weighted_u(k: usize, t: f64) -> f64 {
    cheb_u(k, t).unwrap() * (1.0 - t * t).sqrt()
}

#[test]
fn hilbert_transform_of_weighted_basis_on_dense_grid() {
    for k in 0..=40 {
        for x in linspace(-0.95, 0.95, 50) {
            let numeric = principal_value(|t| weighted_u(k, t), x);
            let closed = cauchy_integral_u(k, x).unwrap();
            assert!((numeric - closed).abs() <= 1e-9, "k={k} x={x}: {numeric} vs {closed}");
        }
    }
}

#[test]
fn hilbert_transform_rejects_closed_endpoints() {
    assert!(cauchy_integral_u::<f64>(3, 1.0).is_err());
    assert!(cauchy_integral_u::<f64>(3, -1.0).is_err());
}

#[test]
fn orthogonality_of_first_kind_rule() {
    let rule = gauss_chebyshev_rule::<f64>(64).unwrap();
    for i in 0..=60 {
        for j in 0..=60 {
            let v = rule.apply(|x| cheb_t(i, x).unwrap() * cheb_t(j, x).unwrap());
            let exact = match (i == j, i) {
                (false, _) => 0.0,
                (true, 0) => PI,
                (true, _) => PI / 2.0,
            };
            assert!((v - exact).abs() <= 1e-12, "({i},{j}): {v}");
        }
    }
}

#[test]
fn rule_nodes_are_mirrored_and_decreasing() {
    for m in [1, 2, 7, 100] {
        let r = gauss_chebyshev_rule::<f64>(m).unwrap();
        assert!(r.nodes.windows(2).all(|w| w[0] > w[1]));
        for i in 0..m {
            assert_eq!(r.nodes[i], -r.nodes[m - 1 - i]);
        }
    }
    let err = gauss_chebyshev_rule::<f64>(0).unwrap_err();
    assert!(err.to_string().contains("quad_nodes"));
}

#[test]
fn derivative_formulas_match_finite_differences() {
    for k in [0, 1, 4, 9, 17] {
        for t in [-0.8, -0.35, 0.1, 0.55, 0.8] {
            // Richardson-extrapolated third differences, O(h⁴)
            let h = 2e-3;
            let third = |f: &dyn Fn(f64) -> f64| {
                (4.0 * finite_difference(f, t, h / 2.0, 3) - finite_difference(f, t, h, 3)) / 3.0
            };
            let d1 = finite_difference(|x| weighted_u(k, x), t, 1e-6, 1);
            assert!((d1 - weighted_u_d1(k, t).unwrap()).abs() <= 1e-6 * d1.abs().max(1.0));
            let d3 = third(&|x| weighted_u(k, x));
            let exact = weighted_u_d3(k, t).unwrap();
            assert!(
                (d3 - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "k={k} t={t}: {d3} vs {exact}"
            );
            let tk = |x: f64| cheb_t(k + 1, x).unwrap();
            let d1 = finite_difference(tk, t, 1e-6, 1);
            assert!((d1 - shifted_t_d1(k, t).unwrap()).abs() <= 1e-6 * d1.abs().max(1.0));
            let d3 = third(&tk);
            let exact = shifted_t_d3(k, t).unwrap();
            assert!(
                (d3 - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "k={k} t={t}: {d3} vs {exact}"
            );
        }
    }
}

#[test]
fn antiderivative_of_weighted_basis_matches_quadrature() {
    for k in 0..12 {
        for t in [-0.9_f64, -0.2, 0.0, 0.45, 0.99] {
            // same integral in the angle variable, τ = cos φ
            let numeric = integrate(|phi| weighted_u(k, phi.cos()) * phi.sin(), t.acos(), PI);
            let closed = weighted_u_antiderivative(k, t.acos());
            assert!((numeric - closed).abs() <= 1e-13, "k={k} t={t}: {numeric} vs {closed}");
        }
        let full = weighted_u_antiderivative(k, 0.0);
        let expected = if k == 0 { PI / 2.0 } else { 0.0 };
        assert!((full - expected).abs() <= 1e-14);
    }
}

/// Integrand of each table in the angle variable (`t = cos θ`,
/// `dt = sin θ dθ`).
fn table_integrand(table: usize, j: usize, k: usize, th: f64) -> f64 {
    let s = th.sin();
    let tj = (j as f64 * th).cos();
    let t = |n: usize| (n as f64 * th).cos();
    let u = |n: usize| ((n + 1) as f64 * th).sin() / s;
    let v = match table {
        1 => t(k + 1) * s.powi(4),
        2 => t(k + 1) * s.powi(3),
        3 => t(k + 1) * s,
        4 => u(k + 1) * s,
        5 => u(k) * s.powi(4),
        6 => u(k) * s.powi(3),
        7 => u(k) * s,
        8 => u(k + 2) / s,
        _ => unreachable!(),
    };
    v * tj * s
}

#[test]
fn influence_tables_match_independent_quadrature() {
    let n = 12;
    let tables = compute_influence_integrals::<f64>(n, 200).unwrap();
    let all = tables.tables();
    for (idx, table) in all.iter().enumerate() {
        for j in 0..=n {
            for k in 0..=n + 2 {
                let exact = integrate(|th| table_integrand(idx + 1, j, k, th), 0.0, PI);
                let v = table[j][k];
                assert!((v - exact).abs() <= 1e-11, "I{} [{j}][{k}]: {v} vs {exact}", idx + 1);
            }
        }
    }
    for j in 0..=n {
        let exact = integrate(|th| (j as f64 * th).cos() * th.sin().powi(5), 0.0, PI);
        assert!((tables.j1[j] - exact).abs() <= 1e-11);
    }
}

#[test]
fn influence_tables_vanish_by_parity() {
    let n = 10;
    let t = compute_influence_integrals::<f64>(n, 100).unwrap();
    for j in 0..=n {
        for k in 0..=n + 2 {
            if (j + k) % 2 == 0 {
                for table in [&t.i1, &t.i2, &t.i3, &t.i4] {
                    assert_eq!(table[j][k], 0.0);
                }
            } else {
                for table in [&t.i5, &t.i6, &t.i8] {
                    assert_eq!(table[j][k], 0.0);
                }
            }
            if k >= 1 {
                assert_eq!(t.i7[j][k], t.i4[j][k - 1]);
            }
        }
        if j % 2 == 1 {
            assert_eq!(t.j1[j], 0.0);
        }
    }
}

#[test]
fn influence_tables_in_single_precision_track_double() {
    let a = compute_influence_integrals::<f32>(6, 60).unwrap();
    let b = compute_influence_integrals::<f64>(6, 60).unwrap();
    for (ta, tb) in a.tables().iter().zip(b.tables().iter()) {
        for (ra, rb) in ta.iter().zip(tb.iter()) {
            for (&x, &y) in ra.iter().zip(rb) {
                assert!((f64::from(x) - y).abs() <= 1e-4 * y.abs().max(1.0));
            }
        }
    }
}

proptest! {
    #[test]
    fn recurrence_matches_trigonometric_form(k in 0usize..80, x in -1.0f64..=1.0) {
        let a = cheb_t(k, x).unwrap();
        let b = cheb_t_trig(k, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-11 * (k as f64 + 1.0));
    }

    #[test]
    fn second_kind_identity(k in 0usize..60, th in 0.01f64..3.13) {
        // U_k(cos θ) sin θ = sin((k+1)θ)
        let v = cheb_u(k, th.cos()).unwrap() * th.sin();
        prop_assert!((v - ((k + 1) as f64 * th).sin()).abs() <= 1e-11 * (k as f64 + 1.0));
    }

    #[test]
    fn hilbert_transform_at_random_points(k in 0usize..25, x in -0.9f64..0.9) {
        let numeric = principal_value(|t| weighted_u(k, t), x);
        prop_assert!((numeric - cauchy_integral_u(k, x).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn out_of_range_arguments_are_rejected(k in 0usize..10, x in 1.0001f64..10.0) {
        prop_assert!(cheb_t(k, x).is_err());
        prop_assert!(cheb_u(k, -x).is_err());
    }
}
