//! Experiment runner.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, FlowMode, NormopMode};
use super::table::{format_f64, Cell, ResultSet, Table};
use crate::error::{Error, Result};
use crate::flow::{closed_form_flow, integrate_flow, locate_radial_sets, phase_portrait, portrait_start, Direction, FlowParams, FlowState, TimeParam};
use crate::geometry::{dual_metric_eb, from_chart, signature, to_chart, transition, ChartId, ChartPoint, SpherePoint};
use crate::hamiltonian::{compact_symbol, linearize_at_point, CompactPhasePoint, FiberChart};
use crate::multiplier::{
    default_c_grid, deformation_tensor_symbolic, determinant_slope, minor_trace_det, positivity_boundary, positivity_scan, threshold_evaluate, MultiplierField,
    Side, TheoremTag, Weights,
};
use crate::normop::{
    boundary_spectrum, mellin_transform, sigma_scan, shoot_exponent, solve_reduced, Collocation, Direction as MellinDirection, MellinGrid, MellinPair,
    ReducedNormalOp,
};
use crate::wavesolver::{decay_fit, default_alpha_grid, sharpness_scan, solve_spherical_forward, weighted_norm, NormSpec};

/// Run one experiment. The normop mode comes from `cfg.normop.mode`.
pub fn run(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<ResultSet> {
    cfg.metric.spec().validate()?;
    let mut rs = ResultSet::new(kind.name(), cfg.seed);
    match kind {
        ExperimentKind::Chart => run_chart(cfg, &mut rs)?,
        ExperimentKind::Flow => match cfg.flow.mode {
            FlowMode::Trace => run_trace(cfg, &mut rs)?,
            FlowMode::Oracle => run_oracle(cfg, &mut rs)?,
            FlowMode::Radial => run_radial(cfg, &mut rs)?,
        },
        ExperimentKind::Portrait => run_portrait(cfg, &mut rs)?,
        ExperimentKind::Thresholds => run_thresholds(cfg, &mut rs)?,
        ExperimentKind::Multiplier => run_multiplier(cfg, &mut rs)?,
        ExperimentKind::Solve => run_solve(cfg, &mut rs)?,
        ExperimentKind::Normop => match cfg.normop.mode {
            NormopMode::Spectrum => run_spectrum(cfg, &mut rs)?,
            NormopMode::Solve => run_reduced(cfg, &mut rs)?,
            NormopMode::MellinCheck => run_mellin(cfg, &mut rs)?,
        },
        ExperimentKind::Mellin => run_mellin(cfg, &mut rs)?,
    }
    Ok(rs)
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn other_chart(c: ChartId) -> ChartId {
    match c {
        ChartId::NearI0 { t_shift } => ChartId::NearIplus { t_shift },
        ChartId::NearIplus { t_shift } => ChartId::NearI0 { t_shift },
    }
}

fn run_chart(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let c = &cfg.chart;
    let n = cfg.metric.n;
    let m = cfg.metric.spec();
    let chart = c.chart.id(c.t_shift);
    let mut t = Table::new("points", &["rho", "x", "t", "r", "round_trip", "via_other_chart", "negative", "positive"]);
    let (mut worst, mut worst_via) = (0.0f64, 0.0f64);
    for &rho in &c.rho {
        for &x in &c.x {
            let p = ChartPoint::new(chart, rho, x, SpherePoint::north_pole(n - 1));
            let st = from_chart(&p)?;
            let back = to_chart(&st, chart)?;
            let rt = (back.rho - rho).abs().max((back.x - x).abs());
            // the other chart need not contain the point
            let via = transition(&p, other_chart(chart))
                .and_then(|q| transition(&q, chart))
                .map(|q| (q.rho - rho).abs().max((q.x - x).abs()))
                .unwrap_or(f64::NAN);
            let (neg, pos) = signature(&dual_metric_eb(&m, &p)?);
            worst = worst.max(rt);
            if via.is_finite() {
                worst_via = worst_via.max(via);
            }
            t.push(vec![rho.into(), x.into(), st.t.into(), st.r.into(), rt.into(), via.into(), neg.into(), pos.into()]);
        }
    }
    rs.tables.push(t);
    rs.set("max_round_trip", worst);
    rs.set("max_round_trip_via_other_chart", worst_via);
    Ok(())
}

fn fiber_label(f: FiberChart) -> String {
    format!("{f:?}")
}

fn run_trace(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let n = cfg.metric.n;
    let m = cfg.metric.spec();
    let f = &cfg.flow;
    let eta = if f.eta_dir.is_empty() {
        let mut e = vec![0.0; n - 1];
        e[0] = 1.0;
        e
    } else {
        f.eta_dir.clone()
    };
    let start = portrait_start(n, f.rho0, f.zeta_over_xi, &eta)?;
    let res = integrate_flow(&m, &start, &f.params)?;
    let k = n - 1;
    let mut cols: Vec<String> = ["s", "chart", "fiber", "rho", "x"].iter().map(|s| s.to_string()).collect();
    cols.extend((1..=k).map(|j| format!("y{j}")));
    cols.push("rho_inf".into());
    cols.push("hat0".into());
    cols.extend((1..=k).map(|j| format!("eta_hat{j}")));
    cols.push("speed".into());
    cols.push("symbol".into());
    let mut t = Table::with_columns("trajectory", cols);
    for tp in &res.trajectory {
        let c = &tp.point;
        let mut row: Vec<Cell> = vec![tp.s.into(), c.base.chart.label().into(), fiber_label(c.fiber).into(), c.base.rho.into(), c.base.x.into()];
        row.extend(c.base.y.y.iter().map(|v| Cell::Num(*v)));
        row.push(c.rho_inf.into());
        row.extend(c.hat.iter().map(|v| Cell::Num(*v)));
        row.push(tp.speed.into());
        row.push(compact_symbol(&m, c)?.into());
        t.push(row);
    }
    rs.tables.push(t);
    rs.set("classification", format!("{:?}", res.classification));
    rs.set("exited", res.exited);
    rs.set("s_end", res.last().s);
    rs.set("max_symbol_drift", res.diagnostics.max_symbol_drift);
    rs.set("accepted_steps", res.diagnostics.accepted_steps);
    rs.set("base_chart_switches", res.diagnostics.base_chart_switches);
    rs.set("fiber_chart_switches", res.diagnostics.fiber_chart_switches);
    Ok(())
}

/// A finite characteristic state of the model flow in `chart`.
fn random_characteristic_state(rng: &mut ChaCha8Rng, chart: ChartId, k: usize) -> FlowState {
    let xi = rng.random_range(0.3..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let eta: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0) / (k as f64).sqrt()).collect();
    let e2: f64 = eta.iter().map(|e| e * e).sum();
    let zeta = if chart.is_near_i0() { (0.5 * xi * xi - e2) / xi } else { (0.5 * xi * xi + e2) / xi };
    FlowState::new(rng.random_range(0.02..0.5), zeta, xi, eta)
}

fn finite_start(chart: ChartId, n: usize, st: &FlowState) -> Result<CompactPhasePoint> {
    let mut w = vec![st.zeta, st.xi];
    w.extend_from_slice(&st.eta);
    CompactPhasePoint::from_covector(ChartPoint::new(chart, st.rho, 0.0, SpherePoint::north_pole(n - 1)), &w, 1.0)
}

fn run_oracle(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let n = cfg.metric.n;
    let m = cfg.metric.spec();
    let f = &cfg.flow;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::with_capacity(f.samples);
    let mut draws = 0usize;
    while cases.len() < f.samples {
        draws += 1;
        if draws > 100 * f.samples {
            return Err(Error::NoConvergence("could not draw enough admissible oracle starts".into()));
        }
        let chart = if rng.random_bool(0.5) { ChartId::NearI0 { t_shift: 0.0 } } else { ChartId::NearIplus { t_shift: 0.0 } };
        let st = random_characteristic_state(&mut rng, chart, n - 1);
        let s = rng.random_range(-f.max_time..f.max_time);
        let Ok(exact) = closed_form_flow(chart, &st, s) else { continue };
        if exact.rho > 0.95 || s.abs() < 1e-3 {
            continue;
        }
        cases.push((chart, st, s, exact));
    }
    let rows: Vec<Result<(ChartId, f64, f64, f64)>> = cases
        .par_iter()
        .map(|(chart, st, s, exact)| {
            let params = FlowParams {
                direction: if *s > 0.0 { Direction::Forward } else { Direction::Backward },
                time: TimeParam::Hamiltonian,
                s_max: s.abs(),
                stop_on_classification: false,
                chart_switching: false,
                ..f.params.clone()
            };
            let res = integrate_flow(&m, &finite_start(*chart, n, st)?, &params)?;
            let p = res.last().point.to_phase()?;
            let scale = exact.rho.abs() + exact.zeta.abs() + exact.xi.abs() + exact.eta.iter().map(|e| e.abs()).sum::<f64>();
            let mut dev = max_of([(p.base.rho - exact.rho).abs(), (p.zeta - exact.zeta).abs(), (p.xi - exact.xi).abs()]);
            for (a, b) in p.eta.iter().zip(&exact.eta) {
                dev = dev.max((a - b).abs());
            }
            Ok((*chart, *s, dev / scale, res.diagnostics.max_symbol_drift))
        })
        .collect();
    let mut t = Table::new("oracle", &["index", "chart", "s", "relative_deviation", "symbol_drift"]);
    let (mut worst, mut drift) = (0.0f64, 0.0f64);
    for (k, r) in rows.into_iter().enumerate() {
        let (chart, s, dev, d) = r?;
        worst = worst.max(dev);
        drift = drift.max(d);
        t.push(vec![k.into(), chart.label().into(), s.into(), dev.into(), d.into()]);
    }
    rs.tables.push(t);
    rs.set("samples", cases.len());
    rs.set("max_relative_deviation", worst);
    rs.set("max_symbol_drift", drift);
    Ok(())
}

fn join(v: impl IntoIterator<Item = f64>) -> String {
    v.into_iter().map(format_f64).collect::<Vec<_>>().join(";")
}

fn run_radial(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let n = cfg.metric.n;
    let m = cfg.metric.spec();
    let mut t = Table::new(
        "radial_sets",
        &["chart", "set", "rho", "hat", "distance", "field_norm", "dynamics", "block", "block_eigenvalues", "block_max_imag", "eigenvalues"],
    );
    let mut unidentified = 0;
    let mut worst = 0.0f64;
    for chart in [ChartId::NearI0 { t_shift: 0.0 }, ChartId::NearIplus { t_shift: 0.0 }] {
        let search = locate_radial_sets(&m, chart)?;
        unidentified += search.unidentified.len();
        for f in &search.found {
            let lin = linearize_at_point(&m, &f.point)?;
            let names = f.id.linearization_block(n);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let block = lin.block(&refs)?;
            let field = crate::hamiltonian::rescaled_field(&m, &f.point)?;
            worst = worst.max(f.distance);
            t.push(vec![
                chart.label().into(),
                f.id.label().into(),
                f.point.base.rho.into(),
                join(f.point.hat.iter().copied()).into(),
                f.distance.into(),
                max_of(field.iter().map(|v| v.abs())).into(),
                format!("{:?}", lin.dynamics).into(),
                names.join(" ").into(),
                join(block.iter().map(|e| e.re)).into(),
                max_of(block.iter().map(|e| e.im.abs())).into(),
                join(lin.eigenvalues.iter().map(|e| e.re)).into(),
            ]);
        }
    }
    rs.set("found", t.len());
    rs.tables.push(t);
    rs.set("unidentified", unidentified);
    rs.set("max_distance", worst);
    Ok(())
}

fn run_portrait(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let m = cfg.metric.spec();
    let spec = crate::flow::PortraitSpec { n: cfg.metric.n, ..cfg.portrait.clone() };
    let report = phase_portrait(&m, &spec)?;
    let mut t = Table::new(
        "entries",
        &["rho0", "zeta_over_xi", "eta_direction", "forward", "backward", "expected_forward", "expected_backward", "matches"],
    );
    for e in &report.entries {
        t.push(vec![
            e.rho0.into(),
            e.zeta_over_xi.into(),
            join(e.eta_direction.iter().copied()).into(),
            format!("{:?}", e.forward).into(),
            format!("{:?}", e.backward).into(),
            format!("{:?}", e.expected_forward).into(),
            format!("{:?}", e.expected_backward).into(),
            e.matches().into(),
        ]);
    }
    let mut c = Table::new("connections", &["connection", "count"]);
    for (k, v) in &report.connections {
        c.push(vec![k.as_str().into(), (*v).into()]);
    }
    rs.set("entries", report.entries.len());
    rs.set("mismatches", report.mismatches);
    rs.tables.push(t);
    rs.tables.push(c);
    Ok(())
}

fn run_thresholds(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let input = cfg.threshold_input();
    let tags: Vec<TheoremTag> = if cfg.thresholds.tags.is_empty() {
        TheoremTag::ALL.to_vec()
    } else {
        cfg.thresholds.tags.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let mut t = Table::new("records", &["tag", "orders", "name", "lhs", "rhs", "pass"]);
    let mut inputs = vec![("primal", input)];
    if cfg.thresholds.dual {
        inputs.push(("dual", input.dual()));
    }
    for tag in &tags {
        for (label, inp) in &inputs {
            let rep = threshold_evaluate(inp, *tag);
            for r in &rep.records {
                t.push(vec![tag.to_string().into(), (*label).into(), r.name.as_str().into(), r.lhs.into(), r.rhs.into(), r.pass.into()]);
            }
            rs.set(&format!("{tag}.{label}"), rep.all_pass());
        }
    }
    let back = input.dual().dual();
    let inv = max_of([(back.s - input.s).abs(), (back.s0 - input.s0).abs(), (back.alpha0 - input.alpha0).abs(), (back.alpha_i - input.alpha_i).abs(), (back.alpha_plus - input.alpha_plus).abs()]);
    rs.set("dual_involution_error", inv);
    rs.tables.push(t);
    Ok(())
}

fn run_multiplier(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let n = cfg.metric.n;
    let p1 = cfg.metric.p1;
    let mu = &cfg.multiplier;
    let w = Weights::new(cfg.weights.alpha0, cfg.weights.alpha_i, cfg.weights.alpha_plus);
    let chart = mu.chart.id(0.0);
    let grid = if mu.c_grid.is_empty() { default_c_grid() } else { mu.c_grid.clone() };
    let scan = positivity_scan(chart, n, w, p1, &grid, mu.side)?;
    let mut t = Table::new("scan", &["c", "margin"]);
    for (c, m) in scan.c_values.iter().zip(&scan.margins) {
        t.push(vec![(*c).into(), (*m).into()]);
    }
    rs.tables.push(t);
    rs.set("definite", scan.definite);
    rs.set("best_c", scan.best_c);
    rs.set("best_margin", scan.best_margin);

    let lambda = match mu.side {
        Side::Forward => p1,
        Side::Adjoint => -p1,
    };
    let c = mu.slope_c;
    let field = MultiplierField::from_weights(w.alpha0, w.alpha_i, w.alpha_plus, c, chart)?;
    let at = |cc: f64| -> Result<(f64, f64)> { Ok(minor_trace_det(&deformation_tensor_symbolic(n, &MultiplierField { c: cc, ..field }, lambda)?)) };
    let ((tr1, det1), (tr2, det2)) = (at(c)?, at(0.5 * c)?);
    let trace_limit = 2.0 * tr2 - tr1;
    let slope = determinant_slope(n, &field, lambda, c)?;
    let mut mt = Table::new(
        "minor",
        &["check_alpha0", "check_alpha_i", "check_alpha_plus", "lambda", "c", "trace", "trace_half", "trace_limit", "det", "det_half", "det_slope"],
    );
    mt.push(vec![
        field.check_alpha0.into(),
        field.check_alpha_i.into(),
        field.check_alpha_plus.into(),
        lambda.into(),
        c.into(),
        tr1.into(),
        tr2.into(),
        trace_limit.into(),
        det1.into(),
        det2.into(),
        slope.into(),
    ]);
    rs.tables.push(mt);
    rs.set("trace_limit", trace_limit);
    rs.set("det_slope", slope);

    let found: Vec<Result<f64>> = mu
        .boundary
        .par_iter()
        .map(|b| {
            let base = Weights::new(b.base[0], b.base[1], b.base[2]);
            positivity_boundary(b.chart.id(0.0), n, base, b.which, (b.bracket[0], b.bracket[1]), p1, b.side, b.c_max, b.tol)
        })
        .collect();
    let mut bt = Table::new("boundaries", &["index", "chart", "which", "side", "alpha0", "alpha_i", "alpha_plus", "boundary"]);
    for (k, (b, v)) in mu.boundary.iter().zip(found).enumerate() {
        let v = v?;
        bt.push(vec![
            k.into(),
            b.chart.id(0.0).label().into(),
            format!("{:?}", b.which).into(),
            format!("{:?}", b.side).into(),
            b.base[0].into(),
            b.base[1].into(),
            b.base[2].into(),
            v.into(),
        ]);
    }
    rs.tables.push(bt);
    Ok(())
}

fn run_solve(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let s = &cfg.solve;
    let n = cfg.metric.n;
    if let Some(tag) = &s.gate {
        let tag: TheoremTag = tag.parse()?;
        let rep = threshold_evaluate(&cfg.threshold_input(), tag);
        let failed: Vec<&str> = rep.failures().iter().map(|r| r.name.as_str()).collect();
        if !failed.is_empty() {
            return Err(Error::ThresholdViolation(format!("{tag} requires {}", failed.join(", "))));
        }
        rs.set("gate", tag.to_string());
    }
    let mut decay = Table::new("decay", &["case", "curve", "exponent", "stderr", "local_spread", "param_lo", "param_hi", "samples"]);
    let mut norms = Table::new("norms", &["case", "family", "k", "value", "divergent", "truncated"]);
    let mut partials = Table::new("norm_partials", &["case", "k", "level", "partial"]);
    let mut sharp = Table::new("sharpness", &["case", "alpha_i", "value", "divergent"]);
    let w = &cfg.weights;
    for case in &s.case {
        let grid = case.grid.unwrap_or(s.grid);
        let sol = solve_spherical_forward(n, case.operator, &case.forcing, &grid)?;
        rs.set(&format!("{}.nodes", case.label), sol.node_count());
        rs.set(&format!("{}.max_abs_psi", case.label), sol.max_abs_psi());
        for d in &case.decay {
            let fit = decay_fit(&sol, d.curve, &d.window)?;
            let curve = serde_json::to_string(&d.curve).map_err(|e| Error::Io(e.to_string()))?;
            decay.push(vec![
                case.label.as_str().into(),
                curve.into(),
                fit.exponent.into(),
                fit.stderr.into(),
                fit.local_spread.into(),
                fit.param_range.0.into(),
                fit.param_range.1.into(),
                fit.samples.into(),
            ]);
        }
        if let Some(nr) = &s.norm {
            for &k in &nr.k {
                let spec = NormSpec { s: w.s as usize, alpha0: w.alpha0, alpha_i: w.alpha_i, alpha_plus: w.alpha_plus, family: nr.family, k, levels: nr.levels };
                let rep = weighted_norm(&sol, &spec, nr.region)?;
                norms.push(vec![case.label.as_str().into(), format!("{:?}", nr.family).into(), k.into(), rep.value.into(), rep.divergent.into(), rep.truncated.into()]);
                for (j, p) in rep.partials.iter().enumerate() {
                    partials.push(vec![case.label.as_str().into(), k.into(), (j + 1).into(), (*p).into()]);
                }
            }
        }
        if let Some(sr) = &s.sharpness {
            let grid = if sr.alpha_grid.is_empty() { default_alpha_grid() } else { sr.alpha_grid.clone() };
            let rep = sharpness_scan(&sol, &grid, w.alpha0, sr.levels)?;
            for e in &rep.entries {
                sharp.push(vec![case.label.as_str().into(), e.alpha_i.into(), e.report.value.into(), e.report.divergent.into()]);
            }
            let (lo, hi) = rep.bracket.unwrap_or((f64::NAN, f64::NAN));
            rs.set(&format!("{}.bracket_lo", case.label), lo);
            rs.set(&format!("{}.bracket_hi", case.label), hi);
        }
    }
    rs.tables.push(decay);
    if s.norm.is_some() {
        rs.tables.extend([norms, partials]);
    }
    if s.sharpness.is_some() {
        rs.tables.push(sharp);
    }
    Ok(())
}

fn operators(cfg: &ExperimentConfig) -> Vec<ReducedNormalOp> {
    let no = &cfg.normop;
    no.lambdas.iter().map(|[re, im]| ReducedNormalOp::new(cfg.metric.n, no.p1_plus, Complex64::new(*re, *im)).with_p0(no.p0)).collect()
}

fn run_spectrum(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let no = &cfg.normop;
    let mut t = Table::new(
        "spectrum",
        &["lambda_re", "lambda_im", "root", "zeta_re", "zeta_im", "exponent_re", "exponent_im", "fitted_re", "fitted_im", "fit_error", "indicial_residual", "double_root"],
    );
    let (mut worst_fit, mut worst_res) = (0.0f64, 0.0f64);
    for op in operators(cfg) {
        let bs = boundary_spectrum(&op);
        for k in 0..2 {
            let (z, a) = (bs.zetas[k], bs.exponents[k]);
            let fit = shoot_exponent(&op, a, no.shoot_x_start, (no.shoot_window[0], no.shoot_window[1]), no.shoot_samples)?;
            let err = (fit.fitted - a).norm();
            let res = op.indicial(z).norm();
            worst_fit = worst_fit.max(err);
            worst_res = worst_res.max(res);
            t.push(vec![
                op.lambda.re.into(),
                op.lambda.im.into(),
                k.into(),
                z.re.into(),
                z.im.into(),
                a.re.into(),
                a.im.into(),
                fit.fitted.re.into(),
                fit.fitted.im.into(),
                err.into(),
                res.into(),
                bs.double_root.into(),
            ]);
        }
    }
    rs.tables.push(t);
    rs.set("max_fit_error", worst_fit);
    rs.set("max_indicial_residual", worst_res);
    Ok(())
}

/// `u = x^a exp(-x^2)` and `f = P u` in closed form.
fn manufactured(op: &ReducedNormalOp, a: f64, x: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let i = Complex64::i();
    let b = 2.0 * i * op.lambda + 2.0 * op.q1;
    let u: Vec<Complex64> = x.iter().map(|x| Complex64::from(x.powf(a) * (-x * x).exp())).collect();
    let f = x
        .iter()
        .zip(&u)
        .map(|(x, u)| {
            // d_s log u and d_s^2 log u in s = log x
            let (l1, l2) = (a - 2.0 * x * x, -4.0 * x * x);
            (0.5 * (-(l1 * l1 + l2) + b * l1 - 4.0 * i * op.q1 * op.lambda) + x * x + op.p0) * u
        })
        .collect();
    (u, f)
}

fn interior_gammas(op: &ReducedNormalOp, given: &[f64], count: usize) -> Vec<f64> {
    if !given.is_empty() {
        return given.to_vec();
    }
    let (lo, hi) = op.gamma_window();
    (1..=count).map(|k| lo + (hi - lo) * k as f64 / (count + 1) as f64).collect()
}

fn run_reduced(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let no = &cfg.normop;
    let colloc = Collocation::new(&no.grid)?;
    let ops = operators(cfg);
    let mut sig = Table::new("sigma", &["lambda_re", "lambda_im", "gamma_i", "admissible", "sigma_min"]);
    let mut min_sigma = f64::INFINITY;
    for op in &ops {
        let gammas = interior_gammas(op, &no.gammas, 5);
        for smp in sigma_scan(op, &[op.lambda], &gammas, &colloc) {
            if smp.admissible {
                min_sigma = min_sigma.min(smp.sigma_min);
            }
            sig.push(vec![smp.lambda.re.into(), smp.lambda.im.into(), smp.gamma_i.into(), smp.admissible.into(), smp.sigma_min.into()]);
        }
    }
    rs.tables.push(sig);
    rs.set("min_sigma", min_sigma);

    let mut offsets = no.end_offsets.clone();
    offsets.sort_by(|a, b| b.total_cmp(a));
    let mut deg = Table::new("degeneration", &["lambda_re", "lambda_im", "end", "offset", "gamma_i", "sigma_min"]);
    let mut monotone = true;
    for op in &ops {
        let (lo, hi) = op.gamma_window();
        for (label, end, dir) in [("lower", lo, 1.0), ("upper", hi, -1.0)] {
            let vals: Vec<f64> = offsets.par_iter().map(|e| colloc.sigma_min(op, end + dir * e)).collect();
            let tail = &vals[vals.len().saturating_sub(4)..];
            monotone &= tail.windows(2).all(|w| w[1] < w[0]);
            for (e, v) in offsets.iter().zip(&vals) {
                deg.push(vec![op.lambda.re.into(), op.lambda.im.into(), label.into(), (*e).into(), (end + dir * e).into(), (*v).into()]);
            }
        }
    }
    rs.tables.push(deg);
    rs.set("degeneration_monotone", monotone);

    let mut man = Table::new("manufactured", &["lambda_re", "lambda_im", "a", "gamma_i", "max_relative_error", "residual"]);
    let mut worst = 0.0f64;
    for op in &ops {
        for &a in &no.manufactured {
            let (ustar, f) = manufactured(op, a, &colloc.x);
            let scale = max_of(ustar.iter().map(|u| u.norm()));
            for g in interior_gammas(op, &[], 3) {
                let sol = solve_reduced(op, &f, g, &colloc, false)?;
                let err = max_of(sol.u.iter().zip(&ustar).map(|(u, v)| (u - v).norm())) / scale;
                worst = worst.max(err);
                man.push(vec![op.lambda.re.into(), op.lambda.im.into(), a.into(), g.into(), err.into(), sol.residual.into()]);
            }
        }
    }
    rs.tables.push(man);
    rs.set("max_manufactured_error", worst);
    Ok(())
}

type Gaussian = (Complex64, f64, f64);

fn random_gaussians(rng: &mut ChaCha8Rng) -> Vec<Gaussian> {
    (0..rng.random_range(1..=4))
        .map(|_| (Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), rng.random_range(-3.0..3.0), rng.random_range(0.5..1.5)))
        .collect()
}

/// `int |sum a_j exp(-(t - c_j)^2 / (2 w_j^2))|^2 dt` in closed form.
fn gaussian_norm_sq(terms: &[Gaussian]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (a1, c1, w1) in terms {
        for (a2, c2, w2) in terms {
            let aa = 0.5 / (w1 * w1) + 0.5 / (w2 * w2);
            let bb = c1 / (w1 * w1) + c2 / (w2 * w2);
            let cc = 0.5 * c1 * c1 / (w1 * w1) + 0.5 * c2 * c2 / (w2 * w2);
            s += a1 * a2.conj() * (std::f64::consts::PI / aa).sqrt() * (bb * bb / (4.0 * aa) - cc).exp();
        }
    }
    s.re
}

fn run_mellin(cfg: &ExperimentConfig, rs: &mut ResultSet) -> Result<()> {
    let me = &cfg.mellin;
    let grid = MellinGrid::spanning((-me.log_span).exp(), me.log_span.exp(), me.len)?;
    let t: Vec<f64> = (0..grid.len).map(|k| grid.t(k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table = Table::new("mellin", &["gamma_plus", "index", "terms", "exact_norm", "sample_norm", "transform_norm", "round_trip"]);
    let (mut iso, mut samp, mut trip) = (0.0f64, 0.0f64, 0.0f64);
    for &gp in &me.gamma_plus {
        for k in 0..me.functions {
            let terms = random_gaussians(&mut rng);
            let u: Vec<Complex64> = t
                .iter()
                .map(|t| terms.iter().map(|(a, c, w)| a * (-(t - c) * (t - c) / (2.0 * w * w)).exp()).sum::<Complex64>() * (gp * t).exp())
                .collect();
            let pair = MellinPair::from_samples(grid, gp, u.clone())?;
            let exact = gaussian_norm_sq(&terms).sqrt();
            let back = mellin_transform(&pair.transform, &grid, MellinDirection::Inverse, gp)?;
            // errors measured with the weight rho^{-gamma_+}
            let rt = max_of(back.iter().zip(&u).zip(&t).map(|((b, u), t)| ((b - u) * (-gp * t).exp()).norm())) / exact;
            let (sn, tn) = (pair.sample_norm(), pair.transform_norm());
            iso = iso.max((tn - exact).abs() / exact);
            samp = samp.max((sn - exact).abs() / exact);
            trip = trip.max(rt);
            table.push(vec![gp.into(), k.into(), terms.len().into(), exact.into(), sn.into(), tn.into(), rt.into()]);
        }
    }
    rs.tables.push(table);
    rs.set("max_isometry_error", iso);
    rs.set("max_sample_norm_error", samp);
    rs.set("max_round_trip", trip);
    Ok(())
}
