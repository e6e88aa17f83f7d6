use nullinf::normop::*;
use nullinf::numerics::special::gamma;
use nullinf::Error;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn example_op() -> ReducedNormalOp {
    ReducedNormalOp::new(3, 0.0, C::new(0.3, -0.2))
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() < tol
}

/// `f = P u*` for `u* = x^a exp(-x^2)`, from `d_s log u* = a - 2 x^2` and
/// `d_s^2 log u* = -4 x^2`.
fn manufactured(op: &ReducedNormalOp, a: f64, x: &[f64]) -> (Vec<C>, Vec<C>) {
    let i = C::i();
    let b = 2.0 * i * op.lambda + 2.0 * op.q1;
    let u: Vec<C> = x.iter().map(|x| C::from(x.powf(a) * (-x * x).exp())).collect();
    let f = x
        .iter()
        .zip(&u)
        .map(|(x, u)| {
            let (p1, p2) = (a - 2.0 * x * x, -4.0 * x * x);
            (0.5 * (-(p1 * p1 + p2) + b * p1 - 4.0 * i * op.q1 * op.lambda) + x * x + op.p0) * u
        })
        .collect();
    (u, f)
}

#[test]
fn boundary_spectrum_examples() {
    let op = ReducedNormalOp::new(3, 0.0, C::new(0.5, 0.0));
    assert_eq!(op.q1, 1.0);
    let bs = boundary_spectrum(&op);
    assert!(close(bs.zetas[0], C::new(1.0, 0.0), 1e-15));
    assert!(close(bs.zetas[1], C::new(0.0, -2.0), 1e-15));
    assert!(close(bs.exponents[0], C::new(0.0, 1.0), 1e-15));
    assert!(close(bs.exponents[1], C::new(2.0, 0.0), 1e-15));
    assert!(!bs.double_root);
    for z in bs.zetas {
        assert!(op.indicial(z).norm() < 1e-14);
    }

    let op = ReducedNormalOp::new(3, 0.25, C::new(0.0, -1.25));
    let bs = boundary_spectrum(&op);
    assert!(bs.double_root);
    assert!(close(bs.exponents[0], C::new(2.5, 0.0), 1e-12));
}

#[test]
fn boundary_spectrum_with_scalar_potential() {
    let op = ReducedNormalOp::new(2, 0.3, C::new(-0.4, -0.1)).with_p0(0.35);
    let bs = boundary_spectrum(&op);
    for z in bs.zetas {
        assert!(op.indicial(z).norm() < 1e-13, "{z}");
    }
    // sum and product of the roots of zeta^2 - (a + b) zeta + a b + 2 p0
    let a = C::new(0.0, -2.0 * op.q1);
    let b = 2.0 * op.lambda;
    assert!(close(bs.zetas[0] + bs.zetas[1], a + b, 1e-13));
    assert!(close(bs.zetas[0] * bs.zetas[1], a * b + 2.0 * op.p0, 1e-13));
}

#[test]
fn shooting_recovers_the_exponents() {
    let ops = [
        example_op(),
        ReducedNormalOp::new(3, 0.0, C::new(0.5, 0.0)),
        ReducedNormalOp::new(3, 0.5, C::new(-0.4, -0.1)),
        ReducedNormalOp::new(2, 0.0, C::new(1.2, -0.3)),
        ReducedNormalOp::new(3, 0.0, C::new(0.7, -0.4)).with_p0(0.2),
    ];
    for op in ops {
        for a in boundary_spectrum(&op).exponents {
            let fit = shoot_exponent(&op, a, 1e-4, (1e-4, 1e-2), 41).unwrap();
            assert!((fit.fitted - a).norm() < 1e-4, "{op:?}: {a} vs {}", fit.fitted);
        }
    }
}

#[test]
fn zero_forcing_and_trivial_kernel() {
    let op = example_op();
    let col = Collocation::new(&ReducedGrid::default()).unwrap();
    let f = vec![C::new(0.0, 0.0); col.len()];
    let sol = solve_reduced(&op, &f, 0.5, &col, true).unwrap();
    assert!(sol.u.iter().all(|u| *u == C::new(0.0, 0.0)));
    let s = sol.sigma_min.unwrap();
    assert!(s > 0.01, "sigma_min = {s}");
    // inverse iteration agrees with the singular value decomposition
    let (_, est) = col.near_kernel(&op, 0.5, 40).unwrap();
    assert!((est - s).abs() < 1e-6 * s);
}

#[test]
fn solve_rejects_weights_outside_the_window() {
    let op = example_op();
    let col = Collocation::new(&ReducedGrid { degree: 64, ..Default::default() }).unwrap();
    let f = vec![C::new(0.0, 0.0); col.len()];
    for g in [0.1, 0.2, 1.0, 1.3] {
        assert!(matches!(solve_reduced(&op, &f, g, &col, false), Err(Error::ThresholdViolation(_))), "gamma = {g}");
    }
    let bad = vec![C::new(1.0, 0.0); col.len()];
    assert!(matches!(solve_reduced(&op, &bad, 0.5, &col, false), Err(Error::Precondition(_))));
}

#[test]
fn manufactured_solution_is_recovered() {
    let col = Collocation::new(&ReducedGrid::default()).unwrap();
    for (op, a) in [
        (example_op(), 4.0),
        (ReducedNormalOp::new(3, 0.5, C::new(-0.4, -0.1)), 5.0),
        (ReducedNormalOp::new(2, 0.0, C::new(1.2, 0.3)), 3.5),
        (example_op().with_p0(0.4), 4.5),
    ] {
        let (ustar, f) = manufactured(&op, a, &col.x);
        let (lo, hi) = op.gamma_window();
        for k in 1..4 {
            let g = lo + (hi - lo) * k as f64 / 4.0;
            let sol = solve_reduced(&op, &f, g, &col, false).unwrap();
            let scale = ustar.iter().fold(0.0f64, |m, u| m.max(u.norm()));
            let err = sol.u.iter().zip(&ustar).fold(0.0f64, |m, (u, v)| m.max((u - v).norm()));
            assert!(err < 1e-7 * scale, "{op:?} gamma {g}: {err}");
            assert!(sol.residual < 1e-8);
        }
    }
}

#[test]
fn smallest_singular_value_over_the_window() {
    let col = Collocation::new(&ReducedGrid { degree: 160, ..Default::default() }).unwrap();
    let base = example_op();
    let lambdas: Vec<C> = (0..5).map(|k| C::new(-0.6 + 0.3 * k as f64, -0.2)).collect();
    let gammas: Vec<f64> = (1..=5).map(|k| 0.2 + 0.8 * k as f64 / 6.0).collect();
    let scan = sigma_scan(&base, &lambdas, &gammas, &col);
    assert_eq!(scan.len(), 25);
    for s in &scan {
        assert!(s.admissible);
        assert!(s.sigma_min > 0.05, "{s:?}");
    }
    // degeneration toward either endpoint of (-Im lambda, q1)
    let (lo, hi) = base.gamma_window();
    let mid = col.sigma_min(&base, 0.5 * (lo + hi));
    for end in [lo, hi] {
        let dir = if end == lo { 1.0 } else { -1.0 };
        let vals: Vec<f64> = [0.2, 0.1, 0.03, 0.01, 0.0].iter().map(|e| col.sigma_min(&base, end + dir * e)).collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0], "{vals:?}");
        }
        assert!(vals[3] < 0.4 * mid, "{vals:?} vs {mid}");
    }
    // the floor at the endpoint falls as the truncated half line grows
    let mut prev = f64::INFINITY;
    for x_min in [1e-6, 1e-12, 1e-24] {
        let c = Collocation::new(&ReducedGrid { x_min, degree: 320, ..Default::default() }).unwrap();
        let s = c.sigma_min(&base, lo + 0.01);
        assert!(s < 0.7 * prev, "x_min {x_min}: {s}");
        prev = s;
    }
}

#[test]
fn injectivity_identity_by_quadrature() {
    let op = example_op();
    let col = Collocation::new(&ReducedGrid::default()).unwrap();
    let (kv, _) = col.near_kernel(&op, 0.5, 30).unwrap();
    let candidates = [
        conjugate(&op, &col.x, &kv),
        col.x.iter().map(|x| C::new(x * x, 0.3 * x.powi(3)) * (-x * x).exp()).collect(),
        col.x.iter().map(|x| C::from_polar(x.powf(1.5) * (-0.5 * x * x).exp(), 0.7 * x.ln())).collect(),
    ];
    for v in &candidates {
        let id = injectivity_identity(&op, &col, v);
        assert!((id.quadratic - id.pairing).abs() < 1e-6 * id.quadratic.abs(), "{id:?}");
        assert!((id.energy - id.energy_pairing).abs() < 1e-6 * id.energy.abs(), "{id:?}");
    }
    // Re lambda~ = 0: the quadratic term vanishes and only the energy remains
    let op0 = ReducedNormalOp::new(3, 0.0, C::new(0.0, -0.2));
    let v = &candidates[1];
    let id = injectivity_identity(&op0, &col, v);
    assert_eq!(id.quadratic, 0.0);
    assert!(id.pairing.abs() < 1e-8 * id.energy);
    assert!(id.energy > 0.0);
}

#[test]
fn conjugation_examples() {
    let op = ReducedNormalOp::new(3, 0.0, C::new(0.5, 0.0));
    assert_eq!(op.lambda_tilde(), C::new(0.5, 1.0));
    let col = Collocation::new(&ReducedGrid::default()).unwrap();
    for op in [op, example_op(), ReducedNormalOp::new(2, 0.4, C::new(-0.8, -0.3))] {
        let w = simplified_kernel(&op, &col).unwrap();
        let u = unconjugate(&op, &col.x, &w);
        let res = conjugation_residual(&op, &col, &u).unwrap();
        assert!(res < 1e-7, "{op:?}: {res}");
        let d = two_path_defect(&op, &col, &u).unwrap();
        assert!(d < 1e-6, "{op:?}: two-path {d}");
        let g: Vec<C> = col.x.iter().map(|x| C::new(x.powi(3), x.powi(4)) * (-x * x).exp()).collect();
        let d = two_path_defect(&op, &col, &g).unwrap();
        assert!(d < 1e-6, "{op:?}: two-path generic {d}");
        // a function that does not solve the simplified equation
        let res = conjugation_residual(&op, &col, &g).unwrap();
        assert!(res > 1e-3);
    }
    let u = vec![C::new(1.0, 0.0); col.len()];
    assert!(matches!(conjugation_residual(&example_op().with_p0(0.1), &col, &u), Err(Error::Precondition(_))));
}

#[test]
fn gamma_function_values() {
    let mut fact = 1.0;
    for k in 1..15 {
        let g = gamma(C::new(k as f64, 0.0));
        assert!((g.re - fact).abs() < 1e-13 * fact && g.im.abs() < 1e-13 * fact);
        fact *= k as f64;
    }
    assert!(close(gamma(C::new(0.5, 0.0)), C::from(PI.sqrt()), 1e-14));
    // |Gamma(i y)|^2 = pi / (y sinh(pi y))
    for y in [0.3, 1.0, 2.5] {
        let g = gamma(C::new(0.0, y));
        assert!((g.norm_sqr() - PI / (y * (PI * y).sinh())).abs() < 1e-13);
    }
    let z = C::new(-1.3, 2.1);
    assert!(close(z * gamma(z), gamma(z + 1.0), 1e-13 * gamma(z + 1.0).norm()));
}

#[test]
fn mellin_of_exponential_is_gamma() {
    let grid = MellinGrid::spanning((-40f64).exp(), 4f64.exp(), 1024).unwrap();
    let u: Vec<C> = grid.rho().iter().map(|r| C::from((-r).exp())).collect();
    // the integral converges for Im lambda > 0
    let pair = MellinPair::from_samples(grid, -1.0, u).unwrap();
    let mut checked = 0;
    for (l, m) in grid.lambdas(-1.0).iter().zip(&pair.transform) {
        if l.re.abs() <= 20.0 {
            let g = gamma(-C::i() * l);
            assert!((m - g).norm() < 1e-8, "lambda {l}: {m} vs {g}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

fn random_gaussians(rng: &mut ChaCha8Rng) -> Vec<(C, f64, f64)> {
    (0..rng.random_range(1..=4))
        .map(|_| (C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), rng.random_range(-3.0..3.0), rng.random_range(0.5..1.5)))
        .collect()
}

/// Exact `int |sum a_j exp(-(t - c_j)^2 / (2 w_j^2))|^2 dt`.
fn gaussian_norm_sq(terms: &[(C, f64, f64)]) -> f64 {
    let mut s = C::new(0.0, 0.0);
    for (a1, c1, w1) in terms {
        for (a2, c2, w2) in terms {
            let aa = 0.5 / (w1 * w1) + 0.5 / (w2 * w2);
            let bb = c1 / (w1 * w1) + c2 / (w2 * w2);
            let cc = 0.5 * c1 * c1 / (w1 * w1) + 0.5 * c2 * c2 / (w2 * w2);
            s += a1 * a2.conj() * (PI / aa).sqrt() * (bb * bb / (4.0 * aa) - cc).exp();
        }
    }
    s.re
}

#[test]
fn mellin_plancherel_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = MellinGrid::spanning((-20f64).exp(), 20f64.exp(), 512).unwrap();
    let t: Vec<f64> = (0..grid.len).map(|k| grid.t(k)).collect();
    for gp in [-1.0, 0.0, 1.0] {
        for _ in 0..20 {
            let terms = random_gaussians(&mut rng);
            // u = rho^{gamma_+} times a sum of Gaussians in log rho
            let u: Vec<C> = t
                .iter()
                .map(|t| terms.iter().map(|(a, c, w)| a * (-(t - c) * (t - c) / (2.0 * w * w)).exp()).sum::<C>() * (gp * t).exp())
                .collect();
            let pair = MellinPair::from_samples(grid, gp, u.clone()).unwrap();
            let exact = gaussian_norm_sq(&terms).sqrt();
            assert!((pair.sample_norm() - exact).abs() < 1e-8 * exact);
            assert!((pair.transform_norm() - exact).abs() < 1e-8 * exact, "gamma_+ {gp}");
            let back = mellin_transform(&pair.transform, &grid, Direction::Inverse, gp).unwrap();
            let err = back.iter().zip(&u).zip(&t).map(|((b, u), t)| ((b - u) * (-gp * t).exp()).norm()).fold(0.0, f64::max);
            assert!(err < 1e-8, "round trip {err}");
        }
    }
}

#[test]
fn mellin_detects_aliasing_and_slow_decay() {
    // compactly supported bump: Fourier tail too heavy for a coarse grid
    let grid = MellinGrid::spanning((-6f64).exp(), 6f64.exp(), 64).unwrap();
    let u: Vec<C> = (0..grid.len)
        .map(|k| {
            let z = grid.t(k) / 2.0;
            C::from(if z.abs() < 1.0 { (-1.0 / (1.0 - z * z)).exp() } else { 0.0 })
        })
        .collect();
    assert!(matches!(mellin_transform(&u, &grid, Direction::Forward, 0.0), Err(Error::Alias(_))));
    let flat = vec![C::new(1.0, 0.0); grid.len];
    assert!(matches!(mellin_transform(&flat, &grid, Direction::Forward, 0.0), Err(Error::Precondition(_))));
}

#[test]
fn radial_sets_at_the_boundary() {
    for sign in [1, -1] {
        let rep = semiclassical_radial_points(sign, 2).unwrap();
        assert_eq!(rep.xi_in, 2.0 * sign as f64);
        assert_eq!(rep.xi_out, 0.0);
        assert_eq!(rep.field_at_in, 0.0);
        assert_eq!(rep.field_at_out, 0.0);
        assert!(rep.min_field_elsewhere > 0.0);
        // source for sign * H at the incoming set, sink at the outgoing set
        assert!(rep.eigen_in.iter().all(|e| *e > 0.0), "{rep:?}");
        assert!(rep.eigen_out.iter().all(|e| *e < 0.0), "{rep:?}");
        for xi in [rep.xi_in, rep.xi_out] {
            assert_eq!(symbol(sign, &PhasePoint::at_boundary(xi, 2)).unwrap(), 0.0);
        }
    }
    let p = PhasePoint::at_boundary(2.0, 1);
    assert!(hamiltonian_field(1, &p).unwrap().iter().all(|v| *v == 0.0));
    let p = PhasePoint::at_boundary(0.0, 3);
    assert!(hamiltonian_field(1, &p).unwrap().iter().all(|v| *v == 0.0));
    // off the radial sets but on the boundary characteristic set
    let mut p = PhasePoint::at_boundary(1.0, 1);
    p.eta[0] = 0.5f64.sqrt();
    assert!(symbol(1, &p).unwrap().abs() < 1e-15);
    assert!(hamiltonian_field(1, &p).unwrap().iter().any(|v| v.abs() > 0.5));
    assert!(semiclassical_radial_points(0, 2).is_err());
}
