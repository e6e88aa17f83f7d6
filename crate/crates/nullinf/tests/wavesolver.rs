use nullinf::wavesolver::*;
use nullinf::Error;

fn bump(ell: usize) -> ForcingSpec {
    ForcingSpec { amplitude: 1.0, t_range: [0.0, 1.0], r_range: [2.5, 3.5], order: 6, ell }
}

/// Interior grid; slices up to `t = 28` lie in its uniform part.
fn local_grid(du: f64) -> GridSpec {
    GridSpec { du, u_min: Some(-3.6), u_max: 40.0, v_uniform: 60.0, v_max: 100.0, stretch: 20.0, quad_points: 6 }
}

/// Exterior grid long enough for 14 exhaustion levels.
fn exterior_grid(v_max: f64) -> GridSpec {
    GridSpec { du: 0.05, u_min: None, u_max: -1.0, v_uniform: 20.0, v_max, stretch: 20.0, quad_points: 6 }
}

fn solve(n: usize, op: WaveOperator, f: &[ForcingSpec], spec: &GridSpec) -> SolutionField {
    solve_spherical_forward(n, op, f, spec).unwrap()
}

const PROBES: [(f64, f64); 9] = [(2.0, 1.0), (3.0, 4.0), (3.0, 0.2), (4.0, 1.5), (6.0, 3.0), (10.0, 8.0), (20.0, 19.0), (30.0, 27.0), (40.0, 2.0)];

#[test]
fn zero_forcing_gives_zero() {
    let f = ForcingSpec { amplitude: 0.0, ..bump(2) };
    let s = solve(3, WaveOperator::Minkowski, &[f], &local_grid(0.1));
    assert_eq!(s.max_abs_psi(), 0.0);
    let s = solve(2, WaveOperator::ModelP1 { p1: 0.3 }, &[f], &local_grid(0.1));
    assert_eq!(s.max_abs_psi(), 0.0);
}

#[test]
fn matches_dalembert_oracle() {
    let f = [bump(0)];
    let s = solve(3, WaveOperator::Minkowski, &f, &local_grid(0.05));
    for (t, r) in PROBES {
        let a = s.value_at(t, r).unwrap();
        let b = dalembert_value(&f, t, r).unwrap();
        assert!((a - b).abs() < 1e-6, "({t}, {r}): {a} vs {b}");
    }
    // node values over the whole grid
    let oracle = dalembert_oracle(&f, &local_grid(0.05)).unwrap();
    assert_eq!(oracle.node_count(), s.node_count());
    let g = &s.grid;
    let mut worst: f64 = 0.0;
    for i in (0..g.nu()).step_by(3) {
        for j in (i..g.nv()).step_by(7) {
            worst = worst.max((s.psi(i, j) - oracle.psi(i, j)).abs());
        }
    }
    assert!(worst < 1e-6, "max deviation {worst}");
}

#[test]
fn solution_is_linear_in_the_forcing() {
    let f1 = bump(1);
    let f2 = ForcingSpec { amplitude: -0.7, t_range: [0.5, 2.0], r_range: [1.0, 2.5], order: 4, ell: 1 };
    for (n, op) in [(3, WaveOperator::Minkowski), (2, WaveOperator::ModelP1 { p1: 0.5 })] {
        let spec = local_grid(0.1);
        let a = solve(n, op, &[f1], &spec);
        let b = solve(n, op, &[f2], &spec);
        let ab = solve(n, op, &[f1, f2.scaled(2.0)], &spec);
        let scale = ab.max_abs_psi();
        for i in 0..ab.grid.nu() {
            for j in i..ab.grid.nv() {
                let d = ab.psi(i, j) - a.psi(i, j) - 2.0 * b.psi(i, j);
                assert!(d.abs() <= 1e-10 * scale.max(1.0), "({i}, {j}): {d}");
            }
        }
    }
}

#[test]
fn vanishes_before_the_forcing_turns_on() {
    let f = ForcingSpec { t_range: [1.0, 2.0], ..bump(3) };
    let s = solve(3, WaveOperator::ModelP1 { p1: -0.2 }, &[f], &GridSpec { u_min: Some(-3.0), ..local_grid(0.05) });
    let g = &s.grid;
    let mut checked = 0;
    for i in 0..g.nu() {
        for j in i..g.nv() {
            if g.t_r(i, j).0 < 1.0 {
                assert_eq!(s.psi(i, j), 0.0, "node ({i}, {j})");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
    assert!(s.max_abs_psi() > 0.0);
}

#[test]
fn discrete_residual_at_half_resolution() {
    for (n, op, ell) in [(3, WaveOperator::Minkowski, 0), (3, WaveOperator::Minkowski, 4), (2, WaveOperator::ModelP1 { p1: 0.5 }, 1)] {
        let s = solve(n, op, &[bump(ell)], &local_grid(0.1));
        let res = s.residual(12);
        assert!(res < 1e-6, "n={n} ell={ell}: {res}");
    }
}

#[test]
fn oracle_vanishes_outside_the_causal_future() {
    let f = [bump(0)];
    for (t, r) in [(-1.0, 3.0), (0.5, 5.0), (1.0, 1.0), (0.2, 0.3), (1.0, 8.0)] {
        assert_eq!(dalembert_value(&f, t, r).unwrap(), 0.0, "({t}, {r})");
    }
    assert!(dalembert_value(&f, 1.0, 2.0).unwrap() != 0.0);
}

#[test]
fn oracle_radiation_field_is_constant_on_outgoing_rays() {
    let f = [bump(0)];
    let (_, v_hi) = f[0].advanced_range();
    for u0 in [-3.0, -2.0, 0.5, 2.0] {
        let r0 = 0.5 * (v_hi - u0) + 0.1;
        let base = dalembert_psi(&f, u0 + r0, r0, 0).unwrap();
        assert!(base.abs() > 1e-6, "u0 = {u0}");
        for r in [2.0 * r0, 10.0 * r0, 1e3 * r0, 1e6 * r0] {
            let p = dalembert_value(&f, u0 + r, r).unwrap() * r;
            assert!((p - base).abs() < 1e-10 * base.abs().max(1.0), "u0 = {u0}, r = {r}: {p} vs {base}");
        }
    }
}

#[test]
fn oracle_is_stable_under_quadrature_refinement() {
    let f = [bump(0), ForcingSpec { amplitude: 0.3, t_range: [0.3, 1.7], r_range: [0.5, 2.0], order: 3, ell: 0 }];
    for (t, r) in PROBES {
        let a = dalembert_psi(&f, t, r, 0).unwrap();
        let b = dalembert_psi(&f, t, r, 8).unwrap();
        assert!((a - b).abs() < 1e-8, "({t}, {r}): {a} vs {b}");
    }
    assert!(matches!(dalembert_psi(&[bump(1)], 2.0, 3.0, 0), Err(Error::Precondition(_))));
}

#[test]
fn norm_of_zero_is_zero() {
    let f = ForcingSpec { amplitude: 0.0, ..bump(1) };
    let s = solve(3, WaveOperator::Minkowski, &[f], &exterior_grid(4e9));
    for (fam, sv, k) in [(Family::EdgeB, 0, 0), (Family::EdgeB, 2, 1), (Family::B, 1, 2)] {
        let spec = NormSpec { s: sv, k, family: fam, ..NormSpec::default() };
        let r = weighted_norm(&s, &spec, Region::Exterior).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.divergent);
    }
}

#[test]
fn weights_commute_through_the_norm() {
    let s = solve(3, WaveOperator::Minkowski, &[bump(0)], &exterior_grid(4e9));
    for (a, b) in [(0.5, 0.2), (-0.3, 0.1), (1.0, -0.25)] {
        // rho_0^a x^{2b} with rho_0 = 1/(r - t), x^2 = (r - t)/r
        let shifted = s.multiplied(|t, r| (r - t).powf(-a) * ((r - t) / r).powf(b));
        for (a0, ai) in [(-1.0, -0.6), (-0.5, -0.8)] {
            let lhs = weighted_norm(&shifted, &NormSpec { alpha0: a0, alpha_i: ai, ..NormSpec::default() }, Region::Exterior).unwrap();
            let rhs = weighted_norm(&s, &NormSpec { alpha0: a0 - a, alpha_i: ai - b, ..NormSpec::default() }, Region::Exterior).unwrap();
            for (p, q) in lhs.partials.iter().zip(&rhs.partials) {
                assert!((p - q).abs() <= 1e-10 * q.abs().max(1e-300), "{p} vs {q}");
            }
            assert!((lhs.value - rhs.value).abs() <= 1e-10 * rhs.value);
        }
    }
}

#[test]
fn norm_is_monotone_in_each_weight() {
    // rho_0 <= 1 and x <= 1 on the exterior domain; larger exponents ask
    // for more decay, so the norm cannot decrease
    let s = solve(3, WaveOperator::Minkowski, &[bump(1)], &exterior_grid(4e9));
    let base = NormSpec { s: 1, ..NormSpec::default() };
    for name in ["alpha0", "alpha_i"] {
        let mut prev: Option<Vec<f64>> = None;
        for step in 0..6 {
            let v = -1.2 + 0.1 * step as f64;
            let spec = match name {
                "alpha0" => NormSpec { alpha0: v, ..base },
                _ => NormSpec { alpha_i: v - 0.1, ..base },
            };
            let r = weighted_norm(&s, &spec, Region::Exterior).unwrap();
            if let Some(p) = &prev {
                for (a, b) in p.iter().zip(&r.partials) {
                    assert!(b >= a, "{name} = {v}: {b} < {a}");
                }
            }
            prev = Some(r.partials);
        }
    }
}

#[test]
fn synthetic_inverse_r_fit() {
    let r: Vec<f64> = (0..40).map(|k| 10f64.powf(1.0 + k as f64 * 0.075)).collect();
    let u: Vec<f64> = r.iter().map(|r| 3.7 / r).collect();
    let fit = fit_power_law(&r, &u).unwrap();
    assert!((fit.slope + 1.0).abs() < 1e-3);
    assert!(matches!(fit_power_law(&r[..10], &u[..10]), Err(Error::InsufficientRange(_))));
}

#[test]
fn decay_along_outgoing_rays() {
    for ell in 0..=2 {
        let s = solve(3, WaveOperator::Minkowski, &[bump(ell)], &exterior_grid(1e5));
        let fit = decay_fit(&s, DecayCurve::OutgoingRay { u_ret: None }, &FitWindow::default()).unwrap();
        assert!((fit.exponent + 1.0).abs() < 0.05, "ell = {ell}: {}", fit.exponent);
        assert!(fit.param_range.1 / fit.param_range.0 >= 99.9);
    }
    let s = solve(2, WaveOperator::Minkowski, &[bump(0)], &exterior_grid(1e5));
    let fit = decay_fit(&s, DecayCurve::OutgoingRay { u_ret: Some(-2.0) }, &FitWindow::default()).unwrap();
    assert!((fit.exponent + 0.5).abs() < 0.05, "n = 2: {}", fit.exponent);
}

#[test]
fn model_operator_decay_in_x() {
    let s = solve(3, WaveOperator::ModelP1 { p1: 0.5 }, &[bump(0)], &exterior_grid(1e7));
    let fit = decay_fit(&s, DecayCurve::TowardScri { rho0: 0.4 }, &FitWindow::default()).unwrap();
    assert!((fit.exponent - 3.0).abs() < 0.1, "{}", fit.exponent);
    let s = solve(3, WaveOperator::Minkowski, &[bump(0)], &exterior_grid(1e7));
    let fit = decay_fit(&s, DecayCurve::TowardScri { rho0: 0.4 }, &FitWindow::default()).unwrap();
    assert!((fit.exponent - 2.0).abs() < 0.1, "{}", fit.exponent);
}

#[test]
fn decay_fit_needs_two_decades() {
    let s = solve(3, WaveOperator::Minkowski, &[bump(0)], &exterior_grid(500.0));
    let r = decay_fit(&s, DecayCurve::OutgoingRay { u_ret: None }, &FitWindow::default());
    assert!(matches!(r, Err(Error::InsufficientRange(_))));
    let r = decay_fit(&s, DecayCurve::Interior { t_over_r: 0.5 }, &FitWindow::default());
    assert!(matches!(r, Err(Error::InsufficientRange(_))));
}

#[test]
fn sharpness_of_the_edge_weight() {
    let s = solve(3, WaveOperator::Minkowski, &[bump(0)], &exterior_grid(4e9));
    let finite = weighted_norm(&s, &NormSpec { alpha_i: -0.6, ..NormSpec::default() }, Region::Exterior).unwrap();
    assert!(finite.is_finite());
    let divergent = weighted_norm(&s, &NormSpec { alpha_i: -0.4, ..NormSpec::default() }, Region::Exterior).unwrap();
    assert!(divergent.divergent);
    let rep = sharpness_scan(&s, &default_alpha_grid(), -1.0, 14).unwrap();
    let (lo, hi) = rep.bracket.expect("transition inside the scan");
    assert!(hi - lo <= 0.1 + 1e-12);
    assert!(lo - 0.05 <= -0.5 && -0.5 <= hi + 0.05, "bracket ({lo}, {hi})");
}

#[test]
fn norm_rejects_short_grids() {
    let s = solve(3, WaveOperator::Minkowski, &[bump(0)], &exterior_grid(1e5));
    let r = weighted_norm(&s, &NormSpec::default(), Region::Exterior);
    assert!(matches!(r, Err(Error::GridTooCoarse(_))));
    let r = weighted_norm(&s, &NormSpec { s: 3, k: 2, levels: 6, ..NormSpec::default() }, Region::Exterior);
    assert!(matches!(r, Err(Error::GridTooCoarse(_))));
}

#[test]
fn second_order_convergence() {
    let probes = [(3.0, 4.0), (6.0, 3.0), (10.0, 8.0), (4.0, 1.5), (20.0, 19.0)];
    for (n, op) in [(3, WaveOperator::Minkowski), (3, WaveOperator::ModelP1 { p1: 0.5 }), (2, WaveOperator::Minkowski)] {
        let vals: Vec<Vec<f64>> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&du| {
                let s = solve(n, op, &[bump(1)], &local_grid(du));
                probes.iter().map(|&(t, r)| s.value_at(t, r).unwrap()).collect()
            })
            .collect();
        let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let slope = (diff(&vals[0], &vals[1]) / diff(&vals[1], &vals[2])).log2();
        assert!((slope - 2.0).abs() < 0.2, "n={n} {op:?}: slope {slope}");
    }
}

#[test]
fn energy_is_conserved_after_the_forcing() {
    let s = solve(3, WaveOperator::Minkowski, &[bump(0)], &local_grid(0.05));
    let e0 = s.slice_energy(3.0).unwrap();
    assert!(e0 > 0.0);
    for t in [5.0, 10.0, 20.0, 28.0] {
        let e = s.slice_energy(t).unwrap();
        assert!((e - e0).abs() < 1e-6 * e0, "t = {t}: {e} vs {e0}");
    }
    assert!(matches!(s.slice_energy(90.0), Err(Error::GridTooCoarse(_))));
}

#[test]
fn b_regularity_persists() {
    for ell in [0, 1] {
        let s = solve(3, WaveOperator::Minkowski, &[bump(ell)], &exterior_grid(4e9));
        let base = NormSpec { alpha_i: -0.6, ..NormSpec::default() };
        assert!(weighted_norm(&s, &base, Region::Exterior).unwrap().is_finite());
        for k in 1..=2 {
            for (family, sv) in [(Family::B, 0), (Family::EdgeB, 1)] {
                let r = weighted_norm(&s, &NormSpec { k, s: sv, family, ..base }, Region::Exterior).unwrap();
                assert!(r.is_finite(), "ell={ell} k={k} {family:?}");
            }
        }
    }
}

#[test]
fn rejects_bad_grids_and_modes() {
    let spec = local_grid(0.5);
    assert!(matches!(solve_spherical_forward(3, WaveOperator::Minkowski, &[bump(0)], &spec), Err(Error::CflViolation(_))));
    let spec = GridSpec { stretch: 0.1, ..local_grid(0.05) };
    assert!(matches!(solve_spherical_forward(3, WaveOperator::Minkowski, &[bump(0)], &spec), Err(Error::CflViolation(_))));
    let spec = local_grid(0.1);
    assert!(matches!(solve_spherical_forward(3, WaveOperator::Minkowski, &[bump(9)], &spec), Err(Error::UnsupportedMode(_))));
    assert!(matches!(solve_spherical_forward(4, WaveOperator::Minkowski, &[bump(0)], &spec), Err(Error::UnsupportedMode(_))));
    assert!(matches!(solve_spherical_forward(3, WaveOperator::Minkowski, &[bump(0), bump(1)], &spec), Err(Error::UnsupportedMode(_))));
}
