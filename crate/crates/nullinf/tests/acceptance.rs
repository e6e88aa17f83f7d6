//! Acceptance run: one line per criterion, exit status 1 if any fails.
//!
//! Each criterion runs the checked-in config through the library runner and
//! compares against values computed here from closed forms.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, RngAlgorithm, TestRng, TestRunner};

use nullinf::cli::{run, Cell, ExperimentConfig, ResultSet, Table};
use nullinf::geometry::chart::{from_chart, to_chart, ChartId, SpacetimePoint};
use nullinf::multiplier::thresholds::ThresholdInput;
use nullinf::normop::mellin::{mellin_transform, Direction, MellinGrid, MellinPair};
use nullinf::wavesolver::*;

type Check = Result<String, String>;

/// `(Re lambda, Im lambda, end)` of one degeneration series.
type DegenerationKey = (f64, f64, String);

type Criterion = (u32, &'static str, u64, fn() -> Check);

fn config(name: &str) -> ExperimentConfig {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    ExperimentConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn execute(name: &str) -> Result<(ExperimentConfig, ResultSet), String> {
    let cfg = config(name);
    let kind = cfg.resolve_kind(None).map_err(|e| e.to_string())?;
    let rs = run(&cfg, kind).map_err(|e| format!("{name}: {e}"))?;
    Ok((cfg, rs))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table<'a>(rs: &'a ResultSet, name: &str) -> Result<&'a Table, String> {
    rs.table(name).map_err(|e| e.to_string())
}

fn number(rs: &ResultSet, key: &str) -> Result<f64, String> {
    rs.number(key).map_err(|e| e.to_string())
}

fn cell<'a>(t: &'a Table, row: usize, col: &str) -> Result<&'a Cell, String> {
    let k = t.column_index(col).map_err(|e| e.to_string())?;
    Ok(&t.rows[row][k])
}

fn text<'a>(t: &'a Table, row: usize, col: &str) -> Result<&'a str, String> {
    cell(t, row, col)?.as_str().ok_or_else(|| format!("{}.{col} is not text", t.name))
}

fn num(t: &Table, row: usize, col: &str) -> Result<f64, String> {
    cell(t, row, col)?.as_f64().ok_or_else(|| format!("{}.{col} is not numeric", t.name))
}

fn flag(t: &Table, row: usize, col: &str) -> Result<bool, String> {
    cell(t, row, col)?.as_bool().ok_or_else(|| format!("{}.{col} is not boolean", t.name))
}

fn list(s: &str) -> Vec<f64> {
    s.split(';').map(|v| v.parse().unwrap()).collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Radial sets of Minkowski space with their fiber positions and the
/// eigenvalues of the linearization on the transverse block.
fn radial_sets() -> Check {
    let (_, rs) = execute("c1_radial_sets.toml")?;
    let t = table(&rs, "radial_sets")?;
    ensure(number(&rs, "unidentified")? == 0.0, || "unidentified zeros of the field".into())?;
    let r = 0.5f64.sqrt();
    let mut seen = Vec::new();
    let mut worst_pos = 0.0f64;
    let mut worst_eig = 0.0f64;
    for i in 0..t.len() {
        let (chart, set) = (text(t, i, "chart")?, text(t, i, "set")?);
        let sign = if set.ends_with("^+") { 1.0 } else { -1.0 };
        let (hat, block): (Vec<f64>, Vec<f64>) = match set.split('^').next().unwrap_or("") {
            "R_in-" => (vec![2.0, 0.0], vec![2.0, -1.0, -1.0]),
            "R_in+" => (vec![2.0, 0.0], vec![1.0, -2.0, 1.0]),
            "R_c" => (vec![0.0, -r], vec![1.0, 1.0, -1.0, 1.0]),
            "R_out" => (vec![0.0, 0.0], vec![-1.0, -1.0]),
            other => return Err(format!("unexpected set {other}")),
        };
        let mut got_hat = list(text(t, i, "hat")?);
        if set.starts_with("R_c") {
            // either point of the circle |eta_hat| = 1/sqrt(2) in n = 2
            got_hat[1] = -got_hat[1].abs();
        }
        let pos = max_diff(&got_hat, &hat).max(num(t, i, "distance")?);
        let pos = if set.starts_with("R_out") { pos } else { pos.max(num(t, i, "rho")?.abs()) };
        let expected = sorted(block.iter().map(|v| sign * v).collect());
        let eig = max_diff(&sorted(list(text(t, i, "block_eigenvalues")?)), &expected).max(num(t, i, "block_max_imag")?);
        worst_pos = worst_pos.max(pos);
        worst_eig = worst_eig.max(eig);
        seen.push(format!("{chart}:{set}"));
    }
    for need in ["NearI0:R_in-^+", "NearI0:R_c^+", "NearI0:R_out^+", "NearIplus:R_in+^+", "NearIplus:R_out^+"] {
        ensure(seen.iter().any(|s| s == need), || format!("{need} not found"))?;
    }
    ensure(worst_pos < 1e-8 && worst_eig < 1e-8, || format!("position error {worst_pos:.1e}, eigenvalue error {worst_eig:.1e}"))?;
    Ok(format!("{} sets, position error {worst_pos:.1e}, eigenvalue error {worst_eig:.1e}", t.len()))
}

fn flow_oracle() -> Check {
    let (cfg, rs) = execute("c2_flow_oracle.toml")?;
    let samples = number(&rs, "samples")?;
    let dev = number(&rs, "max_relative_deviation")?;
    let drift = number(&rs, "max_symbol_drift")?;
    ensure(samples == cfg.flow.samples as f64 && samples >= 200.0, || format!("{samples} samples"))?;
    ensure(dev < 1e-6 && drift < 1e-6, || format!("deviation {dev:.1e}, drift {drift:.1e}"))?;
    Ok(format!("{samples} starts, relative deviation {dev:.1e}, symbol drift {drift:.1e}"))
}

/// Expected forward and backward limits over the fiber grid, from the
/// explicit model flows.
fn expected_limits(rho0: f64, zeta_over_xi: f64) -> (&'static str, &'static str) {
    if rho0 > 0.0 && (zeta_over_xi - 0.5).abs() < 1e-12 {
        ("ToRinPlus", "ToRinMinus")
    } else if rho0 == 0.0 && zeta_over_xi > 0.0 && zeta_over_xi < 0.5 {
        ("ToRinMinus", "ToRc")
    } else {
        ("ToRout", "ToRc")
    }
}

fn portrait() -> Check {
    let (_, rs) = execute("c3_portrait.toml")?;
    let t = table(&rs, "entries")?;
    let mut wrong = 0;
    let mut kinds = [0usize; 3];
    for i in 0..t.len() {
        let (f, b) = expected_limits(num(t, i, "rho0")?, num(t, i, "zeta_over_xi")?);
        if text(t, i, "forward")? != f || text(t, i, "backward")? != b {
            wrong += 1;
        }
        kinds[match f {
            "ToRinMinus" => 0,
            "ToRinPlus" => 1,
            _ => 2,
        }] += 1;
    }
    ensure(wrong == 0, || format!("{wrong} of {} grid points misclassified", t.len()))?;
    ensure(kinds.iter().all(|&k| k > 0), || format!("connection counts {kinds:?}"))?;
    Ok(format!(
        "{} starts, 0 misclassified; R_c to R_in,- {}, R_in,- to R_in,+ {}, to R_out {}",
        t.len(),
        kinds[0],
        kinds[1],
        kinds[2]
    ))
}

fn decay() -> Check {
    let (cfg, rs) = execute("c4_decay.toml")?;
    let target = -(cfg.metric.n as f64 - 1.0) / 2.0;
    let t = table(&rs, "decay")?;
    let mut parts = Vec::new();
    for i in 0..t.len() {
        let e = num(t, i, "exponent")?;
        ensure((e - target).abs() <= 0.05, || format!("{}: exponent {e:.4} vs {target}", text(t, i, "case").unwrap_or("?")))?;
        parts.push(format!("{:.4}", e));
    }
    ensure(t.len() == 3, || format!("{} decay fits", t.len()))?;

    let (cfg, rs) = execute("c4_model_p1.toml")?;
    let p1 = cfg.metric.p1;
    let target_x = cfg.metric.n as f64 - 1.0 + 2.0 * p1;
    let e = num(table(&rs, "decay")?, 0, "exponent")?;
    ensure((e - target_x).abs() <= 0.1, || format!("p1 = {p1}: x exponent {e:.4} vs {target_x}"))?;
    Ok(format!("outgoing-ray exponents {} (target {target}); p1 = {p1} x exponent {e:.4} (target {target_x})", parts.join(", ")))
}

fn sharpness() -> Check {
    let (cfg, rs) = execute("c5_sharpness.toml")?;
    ensure(cfg.weights.alpha0 == -1.0 && cfg.weights.s == 0.0, || "config must use s = 0, alpha0 = -1".into())?;
    let t = table(&rs, "sharpness")?;
    let at = |a: f64| -> Result<bool, String> {
        let i = (0..t.len()).find(|&i| (num(t, i, "alpha_i").unwrap() - a).abs() < 1e-9).ok_or(format!("alpha_I = {a} not scanned"))?;
        flag(t, i, "divergent")
    };
    ensure(!at(-0.6)? && at(-0.4)?, || "expected finite at -0.6 and divergent at -0.4".into())?;
    let (lo, hi) = (number(&rs, "l0.bracket_lo")?, number(&rs, "l0.bracket_hi")?);
    ensure(lo < hi && lo >= -0.55 - 1e-9 && hi <= -0.45 + 1e-9, || format!("bracket ({lo}, {hi})"))?;
    Ok(format!("finite at -0.6, divergent at -0.4, transition bracket ({lo:.2}, {hi:.2})"))
}

fn multiplier() -> Check {
    let (cfg, rs) = execute("c6_multiplier.toml")?;
    let p1 = cfg.metric.p1;
    let b = table(&rs, "boundaries")?;
    let mut worst = 0.0f64;
    for i in 0..b.len() {
        let alpha0 = num(b, i, "alpha0")?;
        let expected = (-0.5 + p1).min(alpha0 + 0.5);
        worst = worst.max((num(b, i, "boundary")? - expected).abs());
    }
    ensure(b.len() >= 2 && worst < 1e-3, || format!("boundary error {worst:.1e}"))?;

    let lambda = p1;
    let check_i = cfg.weights.alpha_i + 0.5;
    let check_0 = cfg.weights.alpha0 + 1.0;
    let trace = -10.0 * check_i + 10.0 * lambda;
    let slope = 8.0 * (check_i - lambda) * (check_i - check_0);
    let (got_t, got_s) = (number(&rs, "trace_limit")?, number(&rs, "det_slope")?);
    let (et, es) = ((got_t - trace).abs() / trace.abs(), (got_s - slope).abs() / slope.abs());
    ensure(et < 0.05 && es < 0.05, || format!("trace {got_t} vs {trace}, slope {got_s} vs {slope}"))?;
    Ok(format!("boundary error {worst:.1e}; trace {got_t:.4} vs {trace:.4}, determinant slope {got_s:.4} vs {slope:.4}"))
}

fn normal_operator() -> Check {
    let (cfg, rs) = execute("c7_normop_solve.toml")?;
    let q1 = 0.5 * (cfg.metric.n as f64 - 1.0) + cfg.normop.p1_plus;
    ensure(q1 == 1.0, || format!("q1 = {q1}"))?;
    let s = table(&rs, "sigma")?;
    let mut lambdas: Vec<(f64, f64)> = Vec::new();
    let mut min_sigma = f64::INFINITY;
    for i in 0..s.len() {
        let (lr, li, g) = (num(s, i, "lambda_re")?, num(s, i, "lambda_im")?, num(s, i, "gamma_i")?);
        ensure(-li < g && g < q1, || format!("gamma_I = {g} outside the window"))?;
        if !lambdas.contains(&(lr, li)) {
            lambdas.push((lr, li));
        }
        min_sigma = min_sigma.min(num(s, i, "sigma_min")?);
    }
    ensure(lambdas.len() == 5 && s.len() == 25, || format!("grid {} x {}", lambdas.len(), s.len() / lambdas.len().max(1)))?;
    ensure(min_sigma > 0.0, || format!("smallest singular value {min_sigma}"))?;

    let d = table(&rs, "degeneration")?;
    let mut series: Vec<(DegenerationKey, Vec<(f64, f64)>)> = Vec::new();
    for i in 0..d.len() {
        let key = (num(d, i, "lambda_re")?, num(d, i, "lambda_im")?, text(d, i, "end")?.to_string());
        let point = (num(d, i, "offset")?, num(d, i, "sigma_min")?);
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(point),
            None => series.push((key, vec![point])),
        }
    }
    for (key, v) in &mut series {
        v.sort_by(|a, b| b.0.total_cmp(&a.0));
        let tail: Vec<f64> = v.iter().rev().take(4).rev().map(|p| p.1).collect();
        ensure(tail.len() == 4 && tail.windows(2).all(|w| w[1] < w[0]), || format!("no degeneration toward {key:?}: {tail:?}"))?;
    }
    ensure(series.len() == 10, || format!("{} degeneration series", series.len()))?;

    let m = table(&rs, "manufactured")?;
    let man = m.numbers("max_relative_error").map_err(|e| e.to_string())?.into_iter().fold(0.0, f64::max);
    ensure(!m.is_empty() && man < 1e-7, || format!("manufactured error {man:.1e}"))?;

    let (_, rs) = execute("c7_normop_spectrum.toml")?;
    let t = table(&rs, "spectrum")?;
    let mut fit = 0.0f64;
    for i in 0..t.len() {
        let lambda = Complex64::new(num(t, i, "lambda_re")?, num(t, i, "lambda_im")?);
        let fitted = Complex64::new(num(t, i, "fitted_re")?, num(t, i, "fitted_im")?);
        // solutions x^{i zeta} with zeta in {2 lambda, -2 i q1}
        let candidates = [Complex64::i() * 2.0 * lambda, Complex64::new(2.0 * q1, 0.0)];
        fit = fit.max(candidates.iter().map(|c| (c - fitted).norm()).fold(f64::INFINITY, f64::min));
    }
    ensure(t.len() >= 8 && fit < 1e-4, || format!("exponent fit error {fit:.1e}"))?;
    Ok(format!("min sigma {min_sigma:.3} on 5 x 5 grid, degeneration monotone at 10 ends, manufactured {man:.1e}, exponent fit {fit:.1e}"))
}

/// Transform of `exp(gamma t) exp(-(t - c)^2 / (2 w^2))`, `t = log rho`, on
/// `Im lambda = -gamma`: `w sqrt(2 pi) exp(-i sigma c - sigma^2 w^2 / 2)`.
fn gaussian_transform(sigma: f64, c: f64, w: f64) -> Complex64 {
    Complex64::from_polar(w * (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * w * w).exp(), -sigma * c)
}

fn mellin() -> Check {
    let (cfg, rs) = execute("c8_mellin.toml")?;
    let t = table(&rs, "mellin")?;
    for g in [-1.0, 0.0, 1.0] {
        let count = t.numbers("gamma_plus").map_err(|e| e.to_string())?.iter().filter(|&&v| v == g).count();
        ensure(count >= 20, || format!("{count} functions at gamma_+ = {g}"))?;
    }
    let (iso, trip) = (number(&rs, "max_isometry_error")?, number(&rs, "max_round_trip")?);
    ensure(iso < 1e-8 && trip < 1e-8, || format!("isometry {iso:.1e}, round trip {trip:.1e}"))?;

    // single Gaussians against the closed-form transform
    let me = &cfg.mellin;
    let grid = MellinGrid::spanning((-me.log_span).exp(), me.log_span.exp(), me.len).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for g in [-1.0, 0.0, 1.0] {
        for (c, w) in [(0.0, 1.0), (1.5, 0.7), (-2.0, 1.3)] {
            let u: Vec<Complex64> = (0..grid.len)
                .map(|k| {
                    let t = grid.t(k);
                    Complex64::new((g * t - (t - c) * (t - c) / (2.0 * w * w)).exp(), 0.0)
                })
                .collect();
            let pair = MellinPair::from_samples(grid, g, u.clone()).map_err(|e| e.to_string())?;
            let peak = w * (2.0 * PI).sqrt();
            for (s, f) in grid.sigma().iter().zip(&pair.transform) {
                worst = worst.max((f - gaussian_transform(*s, c, w)).norm() / peak);
            }
            let norm = (w * PI.sqrt()).sqrt();
            worst = worst.max((pair.transform_norm() - norm).abs() / norm);
            let back = mellin_transform(&pair.transform, &grid, Direction::Inverse, g).map_err(|e| e.to_string())?;
            for (k, (b, u)) in back.iter().zip(&u).enumerate() {
                worst = worst.max(((b - u) * (-g * grid.t(k)).exp()).norm());
            }
        }
    }
    ensure(worst < 1e-8, || format!("closed-form Gaussian error {worst:.1e}"))?;
    Ok(format!("isometry {iso:.1e}, round trip {trip:.1e}, closed-form Gaussians {worst:.1e}"))
}

fn runner(cases: u32) -> TestRunner {
    let config = PropConfig { cases, failure_persistence: None, ..PropConfig::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn chart_round_trips() -> Result<f64, String> {
    let mut runner = runner(512);
    let worst = std::cell::Cell::new(0.0f64);
    let strategy = (any::<bool>(), -3.0..3.0f64, 0.01..0.99f64, 0.01..0.99f64, -1.0..1.0f64, -1.0..1.0f64);
    runner
        .run(&strategy, |(near_i0, shift, rho, x, a, b)| {
            let chart = if near_i0 { ChartId::NearI0 { t_shift: shift } } else { ChartId::NearIplus { t_shift: shift } };
            // independent inverse of the chart map
            let gap = 1.0 / rho;
            let t_star = if near_i0 { shift - gap } else { shift + gap };
            let r = gap / (x * x);
            let (ca, sa, cb, sb) = (a.cos(), a.sin(), b.cos(), b.sin());
            let p = SpacetimePoint { t: t_star + r, r, omega: vec![ca * cb, ca * sb, sa] };
            let c = to_chart(&p, chart).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let q = from_chart(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let err = ((c.rho - rho).abs() / rho)
                .max((c.x - x).abs() / x)
                .max((q.t - p.t).abs() / p.t.abs().max(1.0))
                .max((q.r - p.r).abs() / p.r)
                .max(q.omega.iter().zip(&p.omega).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max));
            worst.set(worst.get().max(err));
            prop_assert!(err < 1e-12, "round trip error {err:e}");
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(worst.get())
}

fn solver_properties() -> Result<String, String> {
    let grid = GridSpec { du: 0.1, u_min: Some(-3.6), u_max: 12.0, v_uniform: 30.0, v_max: 40.0, stretch: 20.0, quad_points: 6 };
    let f1 = ForcingSpec { amplitude: 1.0, t_range: [0.0, 1.0], r_range: [2.5, 3.5], order: 6, ell: 1 };
    let f2 = ForcingSpec { amplitude: -0.4, t_range: [0.2, 1.5], r_range: [1.0, 2.0], order: 4, ell: 1 };
    let solve = |f: &[ForcingSpec]| solve_spherical_forward(3, WaveOperator::Minkowski, f, &grid).map_err(|e| e.to_string());
    let (a, b, ab) = (solve(&[f1])?, solve(&[f2])?, solve(&[f1, f2.scaled(3.0)])?);
    let g = &ab.grid;
    let scale = ab.max_abs_psi();
    let (mut lin, mut outside, mut zeros) = (0.0f64, 0.0f64, 0usize);
    for i in 0..g.nu() {
        for j in i..g.nv() {
            lin = lin.max((ab.psi(i, j) - a.psi(i, j) - 3.0 * b.psi(i, j)).abs() / scale);
            // outside J+ of {0 <= t <= 1, 2.5 <= r <= 3.5}, one cell of margin
            let (t, r) = g.t_r(i, j);
            let dist = (2.5 - r).max(r - 3.5).max(0.0);
            if t < 0.0 || dist > t + 0.2 {
                outside = outside.max(a.psi(i, j).abs());
                zeros += 1;
            }
        }
    }
    ensure(lin < 1e-10, || format!("linearity defect {lin:.1e}"))?;
    ensure(outside == 0.0 && zeros > 100, || format!("|psi| = {outside:e} outside the causal future ({zeros} nodes)"))?;
    Ok(format!("linearity {lin:.1e}, zero at {zeros} nodes outside the causal future"))
}

fn properties() -> Check {
    let chart = chart_round_trips()?;

    let (_, trace) = execute("flow_trace.toml")?;
    let (_, oracle) = execute("c2_flow_oracle.toml")?;
    let drift = number(&trace, "max_symbol_drift")?.max(number(&oracle, "max_symbol_drift")?);
    ensure(drift < 1e-6, || format!("symbol drift {drift:.1e}"))?;

    let solver = solver_properties()?;

    let (_, reg) = execute("c9_b_regularity.toml")?;
    let t = table(&reg, "norms")?;
    let mut ks = Vec::new();
    for i in 0..t.len() {
        let k = num(t, i, "k")?;
        let v = num(t, i, "value")?;
        ensure(!flag(t, i, "divergent")? && v.is_finite() && v > 0.0, || format!("k = {k} norm {v} diverges"))?;
        ks.push(k as usize);
    }
    ensure(ks.contains(&1) && ks.contains(&2), || "k = 1, 2 not evaluated".into())?;

    let (_, th) = execute("c9_thresholds.toml")?;
    let inv = number(&th, "dual_involution_error")?;
    let mut runner = runner(256);
    runner
        .run(&(-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64), |(s, s0, a0, ai, ap)| {
            let x = ThresholdInput { s, s0, alpha0: a0, alpha_i: ai, alpha_plus: ap, ..ThresholdInput::default() };
            let d = x.dual();
            prop_assert!((d.s - (1.0 - s)).abs() < 1e-15 && (d.alpha_i - (-ai - 1.0)).abs() < 1e-15);
            let dd = d.dual();
            for (u, v) in [(dd.s, s), (dd.s0, s0), (dd.alpha0, a0), (dd.alpha_i, ai), (dd.alpha_plus, ap)] {
                prop_assert!((u - v).abs() < 1e-14);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    ensure(inv < 1e-14, || format!("dual involution error {inv:e}"))?;

    Ok(format!("chart round trip {chart:.1e}, symbol drift {drift:.1e}, {solver}, b-norms finite for k = {ks:?}, duality involution {inv:.0e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "radial-set table", 10, radial_sets),
        (2, "flow oracle equivalence", 30, flow_oracle),
        (3, "phase-portrait connectivity", 120, portrait),
        (4, "decay reproduction", 300, decay),
        (5, "threshold sharpness", 600, sharpness),
        (6, "multiplier positivity", 30, multiplier),
        (7, "reduced normal operator", 120, normal_operator),
        (8, "Mellin and Plancherel", 10, mellin),
        (9, "property suites", 600, properties),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took {:.1} s, limit {limit} s", elapsed.as_secs_f64())),
            o => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("criterion {id} {status} {name}: {detail} [{:.2} s of {limit} s]", elapsed.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
