mod support;

use kinhy::config::EquilibriumKind;
use kinhy::imex::{ars233, check_order_conditions, implicit_relaxation_solve, ButcherTableau};
use kinhy::indicators::{s1_matrix, schur_reduce, sonine_moments, CellGradient};
use kinhy::linalg::eig_symmetric;
use kinhy::mesh::{Primitives, VelocityGrid, VelocityLattice};
use kinhy::moments::{compute_moments, conserved_moments, maxwellian, Closure};
use kinhy::riemann::{ExactRiemann, State1d};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use support::*;

#[test]
fn eigenvalues_match_jacobi_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (a, b, c) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let m = [[a, b], [b, c]];
        let ours = eig_symmetric::<f64, 2>(&m).unwrap();
        let reference = jacobi_eigenvalues(m);
        for (x, y) in ours.iter().zip(&reference) {
            worst = worst.max((x - y).abs());
        }
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn three_by_three_eigenvalues_match_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let mut m = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                m[i][j] = rng.gen_range(-2.0..2.0);
                m[j][i] = m[i][j];
            }
        }
        let ours = eig_symmetric::<f64, 3>(&m).unwrap();
        let reference = jacobi_eigenvalues(m);
        for (x, y) in ours.iter().zip(&reference) {
            assert!((x - y).abs() <= 1e-12, "{ours:?} vs {reference:?}");
        }
    }
}

#[test]
fn jacobi_oracle_on_known_spectra() {
    let ev = jacobi_eigenvalues([[1.0, 0.3], [0.3, 1.0]]);
    assert!((ev[0] - 0.7).abs() < 1e-15 && (ev[1] - 1.3).abs() < 1e-15);
    let ev = jacobi_eigenvalues([[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.5]]);
    assert_eq!(ev, vec![-1.0, 0.5, 2.0]);
}

#[test]
fn maxwellian_moments_match_closed_forms() {
    let v = VelocityGrid::<f64>::new(48, 9.0).unwrap();
    let (rho, u, t) = (1.7, [0.4, -0.25], 0.8);
    let f = maxwellian(rho, u, t, &v).unwrap();
    let m = compute_moments(&f, &v, 1e-12).unwrap();
    assert!((m.rho - rho).abs() < 1e-12);
    assert!((m.u[0] - u[0]).abs() < 1e-12 && (m.u[1] - u[1]).abs() < 1e-12);
    assert!((m.temperature - t).abs() < 1e-12);
    let energy = 0.5 * rho * (u[0] * u[0] + u[1] * u[1]) + rho * t;
    assert!((m.energy - energy).abs() < 1e-12);
    assert!((m.theta[0][0] - t).abs() < 1e-12 && m.theta[0][1].abs() < 1e-12);
}

#[test]
fn maxwellian_c_bar_is_the_sonine_offset() {
    let v = VelocityGrid::<f64>::new(32, 8.0).unwrap();
    let f = maxwellian(0.9, [0.3, 0.1], 1.1, &v).unwrap();
    let m = compute_moments(&f, &v, 1e-12).unwrap();
    let c2 = sonine_moments(&f, &m, &v).unwrap().c_bar;
    assert!((c2 - 2.0).abs() <= 1e-6, "{c2}");

    let v3 = VelocityLattice::<f64, 3>::new(32, 8.0).unwrap();
    let f3 = maxwellian(1.0, [0.2, 0.0, -0.1], 1.0, &v3).unwrap();
    let m3 = compute_moments(&f3, &v3, 1e-12).unwrap();
    let c3 = sonine_moments(&f3, &m3, &v3).unwrap().c_bar;
    assert!((c3 - 2.5).abs() <= 1e-6, "{c3}");
}

struct IndicatorCase {
    prim: Primitives<f64>,
    grad: CellGradient<f64>,
    beta: f64,
    tau: f64,
}

fn indicator_case() -> IndicatorCase {
    IndicatorCase {
        prim: Primitives::from_rho_u_p(1.3, 0.2, -0.1, 1.3 * 0.9),
        grad: CellGradient { grad_u: [[0.4, 0.3], [-0.2, -0.1]], grad_t: [0.5, -0.3] },
        beta: -0.5,
        tau: 1.3,
    }
}

fn schur_of(f: &[f64], v: &VelocityGrid<f64>) -> [[f64; 2]; 2] {
    let m = compute_moments(f, v, 1e-12).unwrap();
    schur_reduce(&sonine_moments(f, &m, v).unwrap()).unwrap()
}

#[test]
fn linear_chapman_enskog_perturbation_reproduces_closed_form() {
    let k = indicator_case();
    let v = VelocityGrid::<f64>::new(64, 10.0).unwrap();
    let u = [k.prim.ux, k.prim.uy];
    let m = maxwellian(k.prim.rho, u, k.prim.temperature, &v).unwrap();
    for eps in [1e-1, 1e-2, 1e-3] {
        let f = perturbed_maxwellian(&m, u, k.prim.temperature, &k.grad, k.beta, k.tau, eps, &v, false);
        let s = schur_of(&f, &v);
        let s1 = s1_matrix(&k.prim, &k.grad, eps, k.beta, k.tau, 2).unwrap();
        assert!(max_abs_diff_2(&s, &s1) < 1e-11, "eps {eps}: {:e}", max_abs_diff_2(&s, &s1));
    }
}

#[test]
fn exponential_perturbation_converges_at_second_order() {
    let k = indicator_case();
    let v = VelocityGrid::<f64>::new(64, 10.0).unwrap();
    let u = [k.prim.ux, k.prim.uy];
    let m = maxwellian(k.prim.rho, u, k.prim.temperature, &v).unwrap();
    let eps = [1e-1, 1e-2, 1e-3];
    let diffs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let f = perturbed_maxwellian(&m, u, k.prim.temperature, &k.grad, k.beta, k.tau, e, &v, true);
            let s1 = s1_matrix(&k.prim, &k.grad, e, k.beta, k.tau, 2).unwrap();
            max_abs_diff_2(&schur_of(&f, &v), &s1)
        })
        .collect();
    let slope = loglog_slope(&eps, &diffs);
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}, {diffs:?}");
}

#[test]
fn relaxation_residual_vanishes() {
    let v = VelocityGrid::<f64>::new(32, 8.0).unwrap();
    let closure = Closure::new(-0.5, EquilibriumKind::Conservative, 1e-12);
    let k = indicator_case();
    let u = [k.prim.ux, k.prim.uy];
    let m = maxwellian(k.prim.rho, u, k.prim.temperature, &v).unwrap();
    let f_star = perturbed_maxwellian(&m, u, k.prim.temperature, &k.grad, k.beta, k.tau, 0.05, &v, true);
    for lambda in [0.1, 1.0, 37.0, 1e4] {
        let mut f = vec![0.0; f_star.len()];
        implicit_relaxation_solve(&f_star, lambda, &closure, &v, &mut f).unwrap();
        let (_, g) = closure.gaussian_of(&f, &v).unwrap();
        let scale = f_star.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        // fixed-point form f = (f* + lambda G[f]) / (1 + lambda)
        let res = f
            .iter()
            .zip(&f_star)
            .zip(&g)
            .fold(0.0f64, |r, ((fk, sk), gk)| r.max((fk - (sk + lambda * gk) / (1.0 + lambda)).abs()));
        assert!(res / scale <= 1e-12, "lambda {lambda}: residual {:e}", res / scale);
        let (a, b) = (conserved_moments(&f, &v), conserved_moments(&f_star, &v));
        for q in 0..4 {
            assert!((a[q] - b[q]).abs() < 1e-12);
        }
    }
}

#[test]
fn sod_star_state_agrees_with_bisection() {
    for gamma in [1.4, 2.0] {
        let l = State1d::new(1.0, 0.0, 1.0);
        let r = State1d::new(0.125, 0.0, 0.1);
        let ex = ExactRiemann::new(l, r, gamma).unwrap();
        let (p, u) = star_pressure_bisection((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), gamma);
        assert!((ex.p_star - p).abs() < 1e-10 && (ex.u_star - u).abs() < 1e-10, "gamma {gamma}");
    }
    let ex = ExactRiemann::new(State1d::new(1.0, 0.0, 1.0), State1d::new(0.125, 0.0, 0.1), 1.4).unwrap();
    assert!((ex.p_star - 0.30313).abs() < 5e-6 && (ex.u_star - 0.92745).abs() < 5e-6);
}

#[test]
fn strong_shock_states_agree_with_bisection() {
    let cases = [
        ((1.0, 0.0, 1000.0), (1.0, 0.0, 0.01)),
        ((5.99924, 19.5975, 460.894), (5.99242, -6.19633, 46.095)),
        ((1.0, -1.0, 0.4), (1.0, 1.0, 0.4)),
        ((1.0, 0.0, 1.0), (0.125, 0.0, 0.03125)),
    ];
    for (l, r) in cases {
        let ex = ExactRiemann::new(State1d::new(l.0, l.1, l.2), State1d::new(r.0, r.1, r.2), 2.0).unwrap();
        let (p, u) = star_pressure_bisection(l, r, 2.0);
        assert!((ex.p_star - p).abs() <= 1e-9 * p.max(1.0), "{l:?} {r:?}: {} vs {p}", ex.p_star);
        assert!((ex.u_star - u).abs() <= 1e-9 * u.abs().max(1.0));
    }
}

#[test]
fn ars233_tableau_entries() {
    let pair = ars233();
    let g = (3.0 + 3f64.sqrt()) / 6.0;
    assert_eq!(pair.implicit.a[1][1], g);
    assert_eq!(pair.implicit.a[2][1], 1.0 - 2.0 * g);
    assert_eq!(pair.explicit.a[2][0], g - 1.0);
    assert_eq!(pair.explicit.b, vec![0.0, 0.5, 0.5]);
    assert_eq!(pair.explicit.c, pair.implicit.c);
}

#[test]
fn perturbed_weight_fails_with_its_size() {
    let mut pair = ars233();
    let delta = 3e-4;
    pair.implicit.b[2] += delta;
    pair.implicit = ButcherTableau::new(pair.implicit.a.clone(), pair.implicit.b.clone());
    let rep = check_order_conditions(&pair, 3).unwrap();
    assert!(!rep.passed());
    let cond = rep.conditions.iter().find(|c| c.description == "sum bI = 1").unwrap();
    assert!((cond.residual - delta).abs() < 1e-15);
}
