use nullinf::flow::*;
use nullinf::geometry::{ChartId, ChartPoint, DecayOrders, Expr, MetricSpec, Perturbation, PerturbationTerm, SpherePoint};
use nullinf::hamiltonian::{CompactPhasePoint, FiberChart, PhasePoint, RadialKind, RadialSetId, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I0: ChartId = ChartId::NearI0 { t_shift: 0.0 };
const IP: ChartId = ChartId::NearIplus { t_shift: 0.0 };

fn boundary(chart: ChartId, rho: f64) -> ChartPoint {
    ChartPoint::new(chart, rho, 0.0, SpherePoint::north_pole(1))
}

fn finite_start(chart: ChartId, st: &FlowState) -> CompactPhasePoint {
    let mut w = vec![st.zeta, st.xi];
    w.extend_from_slice(&st.eta);
    CompactPhasePoint::from_covector(boundary(chart, st.rho), &w, 1.0).unwrap()
}

fn state_of(c: &CompactPhasePoint) -> FlowState {
    let p: PhasePoint = c.to_phase().unwrap();
    FlowState::new(p.base.rho, p.zeta, p.xi, p.eta)
}

fn random_model_state(rng: &mut ChaCha8Rng, chart: ChartId) -> FlowState {
    let xi = rng.random_range(0.3..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let eta = rng.random_range(-1.0..1.0);
    let zeta = if chart.is_near_i0() { (0.5 * xi * xi - eta * eta) / xi } else { (0.5 * xi * xi + eta * eta) / xi };
    FlowState::new(rng.random_range(0.02..0.5), zeta, xi, vec![eta])
}

#[test]
fn closed_form_group_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 200 {
        let chart = if rng.random_bool(0.5) { I0 } else { IP };
        let st = random_model_state(&mut rng, chart);
        let (s1, s2) = (rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
        let (Ok(a), Ok(mid)) = (closed_form_flow(chart, &st, s1 + s2), closed_form_flow(chart, &st, s1)) else { continue };
        let Ok(b) = closed_form_flow(chart, &mid, s2) else { continue };
        for (u, v) in [(a.rho, b.rho), (a.zeta, b.zeta), (a.xi, b.xi), (a.eta[0], b.eta[0])] {
            assert!((u - v).abs() < 1e-12 * (1.0 + u.abs()), "{u} vs {v}");
        }
        checked += 1;
    }
}

#[test]
fn closed_form_rejects_times_outside_interval() {
    let st = FlowState::new(0.1, 0.0, 2f64.sqrt(), vec![1.0]);
    assert!(closed_form_flow(I0, &st, -1.0).is_err());
    let off = FlowState::new(0.1, 1.0, 1.0, vec![0.0]);
    assert!(closed_form_flow(I0, &off, 0.1).is_err());
    let zero = FlowState::new(0.1, 0.0, 0.0, vec![0.0]);
    assert!(closed_form_flow(IP, &zero, 0.1).is_err());
}

#[test]
fn integrator_matches_closed_form_on_random_model_starts() {
    let m = MetricSpec::minkowski(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 200 {
        let chart = if rng.random_bool(0.5) { I0 } else { IP };
        let st = random_model_state(&mut rng, chart);
        let s = rng.random_range(-1.0..1.0);
        let Ok(exact) = closed_form_flow(chart, &st, s) else { continue };
        if exact.rho > 0.95 || s.abs() < 1e-3 {
            continue;
        }
        let params = FlowParams {
            direction: if s > 0.0 { Direction::Forward } else { Direction::Backward },
            time: TimeParam::Hamiltonian,
            s_max: s.abs(),
            stop_on_classification: false,
            chart_switching: false,
            ..Default::default()
        };
        let res = integrate_flow(&m, &finite_start(chart, &st), &params).unwrap();
        assert!((res.last().s - s.abs()).abs() < 1e-12);
        let got = state_of(&res.last().point);
        let scale = exact.rho.abs() + exact.zeta.abs() + exact.xi.abs() + exact.eta[0].abs();
        let dev = [got.rho - exact.rho, got.zeta - exact.zeta, got.xi - exact.xi, got.eta[0] - exact.eta[0]]
            .iter()
            .fold(0.0f64, |a, b| a.max(b.abs()))
            / scale;
        worst = worst.max(dev);
        count += 1;
    }
    assert!(worst < 1e-6, "max relative deviation {worst:e}");
}

#[test]
fn incoming_manifold_is_invariant() {
    let m = MetricSpec::minkowski(2);
    let start = CompactPhasePoint::new(boundary(I0, 0.1), FiberChart::ZetaLarge(Sign::Plus), 0.0, vec![2.0, 0.0]);
    let res = integrate_flow(&m, &start, &FlowParams::default()).unwrap();
    assert_eq!(res.classification, Classification::ToRinPlus);
    assert_eq!(res.diagnostics.base_chart_switches, 1);
    for tp in &res.trajectory {
        let w = tp.point.unit_covector();
        assert!(w[2].abs() < 1e-9 && (w[1] - 2.0 * w[0]).abs() < 1e-9);
    }
    for pair in res.trajectory.windows(2) {
        assert!(pair[1].s > pair[0].s);
    }
}

#[test]
fn generic_future_start_near_timelike_infinity() {
    let m = MetricSpec::minkowski(2);
    // zeta > 0, xi in (0, 2 zeta) on the future component near timelike infinity
    let (zeta, xi) = (1.0f64, 0.8f64);
    let eta = (xi * zeta - 0.5 * xi * xi).sqrt();
    let start = CompactPhasePoint::from_covector(boundary(IP, 0.3), &[zeta, xi, eta], 0.0).unwrap();
    let fw = integrate_flow(&m, &start, &FlowParams::default()).unwrap();
    assert_eq!(fw.classification, Classification::ToRout);
    let bw = integrate_flow(&m, &start, &FlowParams { direction: Direction::Backward, ..Default::default() }).unwrap();
    assert_eq!(bw.classification, Classification::ToRc);
    assert!(bw.diagnostics.base_chart_switches >= 1);
    for res in [&fw, &bw] {
        assert!(res.diagnostics.max_symbol_drift < 1e-6);
    }
}

fn future_component(c: &CompactPhasePoint) -> bool {
    let w = c.unit_covector();
    if c.base.chart.is_near_i0() {
        w[1] - w[0] > 0.0
    } else {
        w[0] > 0.0
    }
}

#[test]
fn component_preserved_and_drift_small() {
    let m = MetricSpec::minkowski(3);
    let start = portrait_start(3, 0.2, 0.2, &[0.6, 0.8]).unwrap();
    for dir in [Direction::Forward, Direction::Backward] {
        let res = integrate_flow(&m, &start, &FlowParams { direction: dir, ..Default::default() }).unwrap();
        assert!(res.diagnostics.max_symbol_drift < 1e-6);
        assert!(res.trajectory.iter().all(|tp| future_component(&tp.point)));
    }
}

#[test]
fn time_reversal_returns_to_start() {
    let m = MetricSpec::minkowski(2);
    let start = portrait_start(2, 0.1, 0.3, &[1.0]).unwrap();
    // the rescaled parameter depends on the fiber chart, so stay inside one
    let fw = FlowParams { s_max: 0.8, stop_on_classification: false, ..Default::default() };
    let a = integrate_flow(&m, &start, &fw).unwrap();
    assert_eq!(a.diagnostics.base_chart_switches + a.diagnostics.fiber_chart_switches, 0);
    let bw = FlowParams { direction: Direction::Backward, ..fw };
    let b = integrate_flow(&m, &a.last().point, &bw).unwrap();
    let end = &b.last().point;
    assert_eq!(end.fiber, start.fiber);
    assert!((end.base.rho - start.base.rho).abs() < 1e-5);
    for (u, v) in end.hat.iter().zip(&start.hat) {
        assert!((u - v).abs() < 1e-5);
    }
}

#[test]
fn classification_stable_under_tolerance_halving() {
    let m = MetricSpec::minkowski(2);
    for (rho0, r) in [(0.0, 0.2), (0.05, -1.0), (0.3, 0.45)] {
        let start = portrait_start(2, rho0, r, &[1.0]).unwrap();
        for dir in [Direction::Forward, Direction::Backward] {
            let p = FlowParams { direction: dir, record: false, ..Default::default() };
            let q = FlowParams { rtol: p.rtol / 2.0, atol: p.atol / 2.0, ..p.clone() };
            assert_eq!(integrate_flow(&m, &start, &p).unwrap().classification, integrate_flow(&m, &start, &q).unwrap().classification);
        }
    }
}

#[test]
fn reaching_rho_one_without_switching_exits() {
    let m = MetricSpec::minkowski(2);
    let start = portrait_start(2, 0.3, 0.0, &[1.0]).unwrap();
    let res = integrate_flow(&m, &start, &FlowParams { chart_switching: false, ..Default::default() }).unwrap();
    assert_eq!(res.classification, Classification::ExitsChart);
}

#[test]
fn radial_starts_are_rejected() {
    let m = MetricSpec::minkowski(2);
    let p = RadialSetId::new(RadialKind::Rc, Sign::Plus).boundary_point(I0, 2, 0.0).unwrap();
    assert!(integrate_flow(&m, &p, &FlowParams::default()).is_err());
}

fn plus_ids(search: &RadialSearch) -> Vec<RadialKind> {
    search.found.iter().filter(|f| f.id.component == Sign::Plus).map(|f| f.id.kind).collect()
}

#[test]
fn radial_sets_of_minkowski() {
    for n in [2, 3] {
        let m = MetricSpec::minkowski(n);
        let s0 = locate_radial_sets(&m, I0).unwrap();
        let mut k0 = plus_ids(&s0);
        k0.sort_by_key(|k| format!("{k:?}"));
        assert_eq!(k0, vec![RadialKind::Rc, RadialKind::RinMinus, RadialKind::Rout]);
        assert!(s0.unidentified.is_empty());
        let sp = locate_radial_sets(&m, IP).unwrap();
        let mut kp = plus_ids(&sp);
        kp.sort_by_key(|k| format!("{k:?}"));
        assert_eq!(kp, vec![RadialKind::RinPlus, RadialKind::Rout]);
        assert!(sp.unidentified.is_empty());
        for f in s0.found.iter().chain(&sp.found) {
            assert!(f.distance < 1e-8);
        }
    }
}

#[test]
fn radial_sets_unchanged_by_perturbation_vanishing_at_null_infinity() {
    let p = Perturbation {
        orders: DecayOrders { l0: 1.0, l_i: 0.5, l_plus: 1.0 },
        terms: vec![PerturbationTerm { row: 0, col: 1, coefficient: Expr::parse("1e-3*x").unwrap() }],
    };
    let m = MetricSpec::perturbation(2, p);
    let base = MetricSpec::minkowski(2);
    for chart in [I0, IP] {
        let a = locate_radial_sets(&m, chart).unwrap();
        let b = locate_radial_sets(&base, chart).unwrap();
        assert_eq!(a.found.len(), b.found.len());
        for f in &a.found {
            let g = b.get(f.id).unwrap();
            assert!(f.distance < 1e-8 && g.distance < 1e-8);
        }
    }
}

#[test]
fn phase_portrait_reproduces_connectivity() {
    let m = MetricSpec::minkowski(2);
    let report = phase_portrait(&m, &PortraitSpec::default()).unwrap();
    for e in &report.entries {
        assert!(e.matches(), "{e:?}");
    }
    assert!(report.connections["ToRc -> ToRinMinus"] > 0);
    assert!(report.connections["ToRinMinus -> ToRinPlus"] > 0);
    assert!(report.connections["ToRc -> ToRout"] > 0);
}
