use fracdiff_core::basis::{jacobi_basis, power_alpha_basis, Flavor};
use fracdiff_core::collocation::{
    build_caputo_operator, build_zero_ic_operator, build_zero_ic_operator_with_flavor, chebyshev_lobatto_nodes,
    make_basis, BasisChoice, CollocationOperator, NodeKind, TimeGrid, Variant,
};
use fracdiff_core::special::{gamma, rl_derivative_monomial};
use fracdiff_core::FractionalOrder;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

/// Largest `|C u - D^a u|` over the rows, for `u = (t - t0)^e`.
fn monomial_error(op: &CollocationOperator, e: f64) -> f64 {
    let t0 = op.grid().t0();
    let alpha = op.order().alpha();
    let samples: Vec<f64> = op.row_nodes().iter().map(|&t| (t - t0).powf(e)).collect();
    let gamma = vec![0.0; op.initial_data_len()];
    let got = op.apply(&samples, &gamma).unwrap();
    let d = rl_derivative_monomial(alpha, e).unwrap();
    op.row_nodes()
        .iter()
        .zip(&got)
        .map(|(&t, g)| (g - d.coeff * (t - t0).powf(d.exponent)).abs())
        .fold(0.0, f64::max)
}

fn zero_ic_exponents(choice: BasisChoice, n: usize, o: FractionalOrder) -> Vec<f64> {
    match choice {
        BasisChoice::Jacobi => (o.p()..n + o.p()).map(|m| m as f64).collect(),
        BasisChoice::PowerAlpha => (1..=n).map(|j| j as f64 * o.alpha()).collect(),
    }
}

#[test]
fn exact_on_zero_data_functions() {
    for variant in [Variant::Caputo, Variant::ZeroIc] {
        for choice in [BasisChoice::Jacobi, BasisChoice::PowerAlpha] {
            for n in [4, 8, 12] {
                for a in [0.3, 0.5, 1.5] {
                    let o = order(a);
                    let g = chebyshev_lobatto_nodes(0.0, 2.0, n).unwrap();
                    let op = CollocationOperator::build(variant, choice, &g, o).unwrap();
                    for e in zero_ic_exponents(choice, n, o) {
                        let err = monomial_error(&op, e);
                        assert!(err <= 1e-10 * op.cond_a(), "{variant:?} {choice:?} N={n} a={a} e={e}: {err}");
                    }
                }
            }
        }
    }
}

#[test]
fn caputo_exact_on_every_basis_function() {
    for choice in [BasisChoice::Jacobi, BasisChoice::PowerAlpha] {
        for n in [4, 8, 12] {
            for a in [0.3, 0.5, 1.5] {
                let o = order(a);
                let g = chebyshev_lobatto_nodes(0.0, 2.0, n).unwrap();
                let op = CollocationOperator::build(Variant::Caputo, choice, &g, o).unwrap();
                let basis = op.basis();
                for j in 0..basis.size() {
                    let samples: Vec<f64> = op.row_nodes().iter().map(|&t| basis.eval(j, t).unwrap()).collect();
                    let gamma: Vec<f64> =
                        (0..op.initial_data_len()).map(|k| basis.int_derivative(j, k, 0.0).unwrap()).collect();
                    let got = op.apply(&samples, &gamma).unwrap();
                    for (r, &t) in op.row_nodes().iter().enumerate() {
                        let want = basis.frac_derivative(j, a, Flavor::Caputo, t).unwrap();
                        assert!((got[r] - want).abs() <= 1e-10 * op.cond_a(), "{choice:?} N={n} a={a} j={j}");
                    }
                }
            }
        }
    }
}

#[test]
fn b_inverts_a_and_c_is_pb() {
    let g = chebyshev_lobatto_nodes(0.0, 2.0, 10).unwrap();
    for a in [0.5, 1.5] {
        let op = CollocationOperator::build(Variant::Caputo, BasisChoice::Jacobi, &g, order(a)).unwrap();
        let id = op.a() * op.b();
        let n = id.nrows();
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((id[(r, c)] - want).abs() <= 1e-10 * op.cond_a());
            }
        }
        let c = op.p_matrix() * op.b();
        let c1 = op.c1();
        let c2 = op.c2().unwrap();
        let scale = c.amax();
        for r in 0..c.nrows() {
            for k in 0..c.ncols() {
                let stored = if k < c1.ncols() { c1[(r, k)] } else { c2[(r, k - c1.ncols())] };
                assert!((stored - c[(r, k)]).abs() <= 1e-12 * scale);
            }
        }
    }
}

#[test]
fn zero_ic_flavors_agree() {
    for choice in [BasisChoice::Jacobi, BasisChoice::PowerAlpha] {
        for a in [0.3, 0.7, 1.2, 1.8] {
            let o = order(a);
            let g = chebyshev_lobatto_nodes(0.0, 2.0, 9).unwrap();
            let basis = make_basis(Variant::ZeroIc, choice, &g, o).unwrap();
            let rl = build_zero_ic_operator_with_flavor(&basis, &g, o, Flavor::RiemannLiouville).unwrap();
            let cap = build_zero_ic_operator_with_flavor(&basis, &g, o, Flavor::Caputo).unwrap();
            let u: Vec<f64> = g.nodes()[1..].iter().map(|t| (3.0 * t).sin() * t * t).collect();
            let x = rl.apply(&u, &[]).unwrap();
            let y = cap.apply(&u, &[]).unwrap();
            for (p, q) in x.iter().zip(&y) {
                // the power basis is badly conditioned; its roundoff scales with cond(A)
                let tol = match choice {
                    BasisChoice::Jacobi => 1e-9 * p.abs().max(1.0),
                    BasisChoice::PowerAlpha => 1e-15 * cap.cond_a() * p.abs().max(1.0),
                };
                assert!((p - q).abs() <= tol, "{choice:?} a={a}: {p} vs {q}");
            }
        }
    }
}

#[test]
fn caputo_and_zero_ic_share_c1() {
    let g = chebyshev_lobatto_nodes(0.0, 2.0, 8).unwrap();
    for a in [0.5, 1.5] {
        let c = CollocationOperator::build(Variant::Caputo, BasisChoice::Jacobi, &g, order(a)).unwrap();
        let z = CollocationOperator::build(Variant::ZeroIc, BasisChoice::Jacobi, &g, order(a)).unwrap();
        assert!((c.c1() - z.c1()).amax() <= 1e-9 * c.c1().amax());
    }
}

#[test]
fn power_basis_special_cases() {
    // N = 1, p = 1: D^0.5 applied to sqrt(t) is Gamma(1.5) at t_1
    let g = chebyshev_lobatto_nodes(0.0, 1.0, 1).unwrap();
    let o = order(0.5);
    let basis = power_alpha_basis(0.5, 0.0, 2).unwrap();
    let op = build_caputo_operator(&basis, &g, o).unwrap();
    let d = op.apply(&[1.0], &[0.0]).unwrap();
    assert!((d[0] - gamma(1.5).unwrap()).abs() < 1e-14);

    let g = chebyshev_lobatto_nodes(0.0, 2.0, 6).unwrap();
    for a in [0.4, 1.6] {
        let o = order(a);
        let basis = power_alpha_basis(a, 0.0, 7).unwrap();
        let op = build_zero_ic_operator(&basis, &g, o).unwrap();
        assert_eq!(op.a().nrows(), 7);
        let u: Vec<f64> = g.nodes()[1..].iter().map(|t| t.powf(a)).collect();
        let want = gamma(a + 1.0).unwrap();
        for v in op.apply(&u, &[]).unwrap() {
            assert!((v - want).abs() < 1e-10, "{v} vs {want}");
        }
        assert!(op.apply(&[0.0; 6], &[]).unwrap().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn near_integer_order_approximates_classical_derivative() {
    let g = chebyshev_lobatto_nodes(0.0, 2.0, 8).unwrap();
    let o = order(1.0 - 1e-8);
    let op = CollocationOperator::build(Variant::ZeroIc, BasisChoice::Jacobi, &g, o).unwrap();
    let u: Vec<f64> = g.nodes()[1..].iter().map(|t| t * t).collect();
    let d = op.apply(&u, &[]).unwrap();
    for (v, &t) in d.iter().zip(&g.nodes()[1..g.n()]) {
        assert!((v - 2.0 * t).abs() < 1e-5, "{v} vs {}", 2.0 * t);
    }
}

#[test]
fn apply_is_linear_and_checks_dimensions() {
    let g = TimeGrid::new(NodeKind::Uniform, 0.0, 2.0, 6).unwrap();
    let op = CollocationOperator::build(Variant::Caputo, BasisChoice::Jacobi, &g, order(1.3)).unwrap();
    let u = [0.1, -0.4, 2.0, 0.3, 1.1, -0.7];
    let v = [1.5, 0.2, -0.3, 0.8, 0.0, 0.9];
    let gu = [0.3, -1.0];
    let gv = [0.5, 0.25];
    let s: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
    let gs: Vec<f64> = gu.iter().zip(&gv).map(|(a, b)| a + b).collect();
    let lhs = op.apply(&s, &gs).unwrap();
    let a = op.apply(&u, &gu).unwrap();
    let b = op.apply(&v, &gv).unwrap();
    for i in 0..6 {
        assert!((lhs[i] - a[i] - b[i]).abs() <= 1e-13 * lhs[i].abs().max(1.0));
    }
    assert!(op.apply(&u[..5], &gu).is_err());
    assert!(op.apply(&u, &[]).is_err());
}

#[test]
fn condition_number_grows_with_n() {
    for choice in [BasisChoice::Jacobi, BasisChoice::PowerAlpha] {
        let mut last = 0.0;
        for n in 2..=12 {
            let g = chebyshev_lobatto_nodes(0.0, 2.0, n).unwrap();
            let op = CollocationOperator::build(Variant::ZeroIc, choice, &g, order(0.5)).unwrap();
            assert!(op.cond_a() >= last, "{choice:?} N={n}");
            last = op.cond_a();
        }
    }
}

#[test]
fn jacobi_orthogonality_weight() {
    // the weight t^p on [0, 2] makes distinct functions orthogonal
    for p in [1usize, 2] {
        let b = jacobi_basis(0.0, 2.0, p, 5).unwrap();
        let n = 10_000;
        let h = 2.0 / n as f64;
        let integral = |i: usize, j: usize| -> f64 {
            (0..=n)
                .map(|k| {
                    let t = k as f64 * h;
                    let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                    w * b.eval(i, t).unwrap() * b.eval(j, t).unwrap() * t.powi(p as i32)
                })
                .sum::<f64>()
                * h
                / 3.0
        };
        assert!(integral(2, 3).abs() < 1e-10);
        assert!(integral(1, 4).abs() < 1e-10);
        assert!(integral(3, 3) > 0.1);
    }
}
