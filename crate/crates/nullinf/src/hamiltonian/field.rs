//! Principal symbols, Hamiltonian vector fields and their linearizations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{CompactPhasePoint, FiberChart, PhasePoint};
use crate::error::{Error, Result};
use crate::geometry::metric::{dual_metric_raw, lapse};
use crate::geometry::{dual_metric_eb, quadratic_form, ChartPoint, MetricKind, MetricSpec};
use crate::numerics::diff::{central4, default_step, derivative_checked};

/// Criticality tolerance in normalized coordinates.
pub const CRITICAL_TOL: f64 = 1e-8;

/// `G_eb` evaluated on the covector of `p`.
pub fn symbol_value(m: &MetricSpec, p: &PhasePoint) -> Result<f64> {
    let g = dual_metric_eb(m, &p.base)?;
    Ok(quadratic_form(&g, &p.covector()))
}

fn symbol_raw(m: &MetricSpec, c: &ChartPoint, w: &[f64]) -> Result<f64> {
    Ok(quadratic_form(&dual_metric_raw(m, c)?, w))
}

/// Component of the characteristic set containing a phase point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Characteristic {
    SigmaPlus,
    SigmaMinus,
    OffCharacteristic,
}

/// Classify `p` relative to `Sigma`; tolerances are relative to the fiber norm.
pub fn characteristic_component(m: &MetricSpec, p: &PhasePoint, tol: f64) -> Result<Characteristic> {
    let norm = p.fiber_norm();
    if norm == 0.0 {
        return Err(Error::Domain("zero covector".into()));
    }
    let v = symbol_value(m, p)? / (norm * norm);
    if v.abs() >= tol {
        return Ok(Characteristic::OffCharacteristic);
    }
    let disc = if p.base.chart.is_near_i0() { p.xi - p.zeta } else { p.zeta } / norm;
    if disc.abs() < tol {
        return Err(Error::ToleranceAmbiguous(format!("symbol {v:e} and time-orientation discriminant {disc:e}")));
    }
    Ok(if disc > 0.0 { Characteristic::SigmaPlus } else { Characteristic::SigmaMinus })
}

/// Base derivatives `(rho d_rho p, x d_x p, x d_{y_j} p)` in closed form, for
/// the metric kinds that have one.
fn base_derivatives_exact(m: &MetricSpec, c: &ChartPoint, w: &[f64]) -> Option<Vec<f64>> {
    let (zeta, xi) = (w[0], w[1]);
    let eta = &w[2..];
    let eta2: f64 = eta.iter().map(|v| v * v).sum();
    let model = match m.kind {
        MetricKind::Perturbation(_) => return None,
        MetricKind::ModelP1 { .. } => true,
        _ => false,
    };
    let mass = match m.kind {
        MetricKind::Schwarzschild { mass } => mass,
        _ => 0.0,
    };
    let corr = if model { 0.0 } else { 0.25 * c.x * c.x };
    let a = if c.chart.is_near_i0() { zeta * xi - 0.5 * xi * xi } else { -zeta * xi + 0.5 * xi * xi } + corr * xi * xi;
    let f = lapse(m, c);
    let q = 2.0 * mass * c.rho * c.x * c.x / (f * f);
    let mut out = Vec::with_capacity(w.len());
    out.push(q * a);
    let dx_corr = if model { 0.0 } else { 0.5 * c.x * c.x * xi * xi };
    out.push(2.0 * q * a + dx_corr / f);
    if model {
        out.extend(std::iter::repeat_n(0.0, eta.len()));
    } else {
        out.extend(c.y.inverse_metric_factor_grad().iter().map(|g| c.x * eta2 * g));
    }
    Some(out)
}

fn shifted(c: &ChartPoint, coord: usize, v: f64) -> ChartPoint {
    let mut d = c.clone();
    match coord {
        0 => d.rho = v,
        1 => d.x = v,
        j => d.y.y[j - 2] = v,
    }
    d
}

/// Step for a coordinate that may sit on a boundary face.
fn face_step(v: f64) -> f64 {
    let h = default_step(v);
    if v > 0.0 && v < 4.0 * h {
        v / 4.0
    } else {
        h
    }
}

/// Base derivatives by fourth-order central differences with a Richardson check.
fn base_derivatives_fd(m: &MetricSpec, c: &ChartPoint, w: &[f64]) -> Result<Vec<f64>> {
    let n = m.n;
    let mut out = Vec::with_capacity(n + 1);
    for coord in 0..=n {
        let (v, weight) = match coord {
            0 => (c.rho, c.rho),
            1 => (c.x, c.x),
            j => (c.y.y[j - 2], c.x),
        };
        if weight == 0.0 {
            out.push(0.0);
            continue;
        }
        let f = |s: f64| symbol_raw(m, &shifted(c, coord, s), w).unwrap_or(f64::NAN);
        let d = derivative_checked(&f, v, face_step(v), 1e-7)?;
        out.push(weight * d);
    }
    Ok(out)
}

/// Assemble the Hamiltonian field from the symbol's partial derivatives.
///
/// Output order: `(rho d_rho, x d_x, x d_{y_j}, d_xi, d_{eta_j}, d_zeta)`.
fn assemble(w: &[f64], fiber: &[f64], base: &[f64]) -> Vec<f64> {
    let k = w.len() - 2;
    let (dzeta, dxi) = (fiber[0], fiber[1]);
    let deta = &fiber[2..];
    let eta = &w[2..];
    let mut h = Vec::with_capacity(2 * w.len());
    h.push(dzeta);
    h.push(dxi);
    h.extend_from_slice(deta);
    let eta_deta: f64 = eta.iter().zip(deta).map(|(a, b)| a * b).sum();
    h.push(-(base[1] + eta_deta));
    for j in 0..k {
        h.push(dxi * eta[j] - base[2 + j]);
    }
    h.push(-base[0]);
    h
}

fn field_raw(m: &MetricSpec, c: &ChartPoint, w: &[f64]) -> Result<Vec<f64>> {
    let g = dual_metric_raw(m, c)?;
    let fiber: Vec<f64> = (0..w.len()).map(|i| 2.0 * (0..w.len()).map(|j| g[(i, j)] * w[j]).sum::<f64>()).collect();
    let base = match base_derivatives_exact(m, c, w) {
        Some(b) => b,
        None => base_derivatives_fd(m, c, w)?,
    };
    Ok(assemble(w, &fiber, &base))
}

/// Hamiltonian vector field of the symbol at `p`; closed form where available,
/// finite differences otherwise.
pub fn hamiltonian_field(m: &MetricSpec, p: &PhasePoint) -> Result<Vec<f64>> {
    dual_metric_eb(m, &p.base)?;
    field_raw(m, &p.base, &p.covector())
}

/// Hamiltonian vector field with every partial derivative of the symbol taken
/// by finite differences.
pub fn hamiltonian_field_fd(m: &MetricSpec, p: &PhasePoint) -> Result<Vec<f64>> {
    dual_metric_eb(m, &p.base)?;
    let w = p.covector();
    let mut fiber = Vec::with_capacity(w.len());
    for i in 0..w.len() {
        let f = |s: f64| {
            let mut v = w.clone();
            v[i] = s;
            symbol_raw(m, &p.base, &v).unwrap_or(f64::NAN)
        };
        fiber.push(derivative_checked(&f, w[i], default_step(w[i]), 1e-7)?);
    }
    let base = base_derivatives_fd(m, &p.base, &w)?;
    Ok(assemble(&w, &fiber, &base))
}

/// Coordinate names of a compactified point in state order.
pub fn compact_coordinate_names(c: &CompactPhasePoint) -> Vec<String> {
    let k = c.base.y.dim();
    let mut names = vec!["rho".to_string(), "x".to_string()];
    names.extend((1..=k).map(|j| format!("y{j}")));
    names.push("rho_inf".into());
    names.push(match c.fiber {
        FiberChart::ZetaLarge(_) => "xi_hat".into(),
        FiberChart::XiLarge(_) => "zeta_hat".into(),
    });
    names.extend((1..=k).map(|j| format!("eta_hat{j}")));
    names
}

/// State vector `(rho, x, y.., rho_inf, hat..)`.
pub fn compact_state(c: &CompactPhasePoint) -> Vec<f64> {
    let mut s = vec![c.base.rho, c.base.x];
    s.extend_from_slice(&c.base.y.y);
    s.push(c.rho_inf);
    s.extend_from_slice(&c.hat);
    s
}

/// Inverse of [`compact_state`] keeping the charts of `like`.
pub fn compact_from_state(like: &CompactPhasePoint, s: &[f64]) -> CompactPhasePoint {
    let k = like.base.y.dim();
    let mut out = like.clone();
    out.base.rho = s[0];
    out.base.x = s[1];
    out.base.y.y.copy_from_slice(&s[2..2 + k]);
    out.rho_inf = s[2 + k];
    out.hat.copy_from_slice(&s[3 + k..]);
    out
}

/// Symbol at the unit covector of a compactified point.
pub fn compact_symbol(m: &MetricSpec, c: &CompactPhasePoint) -> Result<f64> {
    symbol_raw(m, &c.base, &c.unit_covector())
}

/// `rho_inf H_p` as coordinate velocities of [`compact_state`].
pub fn rescaled_field(m: &MetricSpec, c: &CompactPhasePoint) -> Result<Vec<f64>> {
    c.check_hats()?;
    if c.base.n() != m.n {
        return Err(Error::Invalid("dimension mismatch between point and metric".into()));
    }
    rescaled_raw(m, c)
}

pub(crate) fn rescaled_raw(m: &MetricSpec, c: &CompactPhasePoint) -> Result<Vec<f64>> {
    let w = c.unit_covector();
    let h = field_raw(m, &c.base, &w)?;
    let k = c.base.y.dim();
    let s = c.fiber.sign().value();
    let mut v = Vec::with_capacity(2 * k + 4);
    v.push(c.base.rho * h[0]);
    v.push(c.base.x * h[1]);
    for j in 0..k {
        v.push(c.base.x * h[2 + j]);
    }
    let h_xi = h[2 + k];
    let h_eta = &h[3 + k..3 + 2 * k];
    let h_zeta = h[3 + 2 * k];
    let (lead, first) = match c.fiber {
        FiberChart::ZetaLarge(_) => (h_zeta, h_xi),
        FiberChart::XiLarge(_) => (h_xi, h_zeta),
    };
    v.push(-s * c.rho_inf * lead);
    v.push(s * (first - c.hat[0] * lead));
    for (h, hat) in h_eta.iter().zip(&c.hat[1..]).take(k) {
        v.push(s * (h - hat * lead));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Step("non-finite rescaled field".into()));
    }
    Ok(v)
}

/// Dynamical type read off from the nonzero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dynamics {
    Source,
    Sink,
    Saddle,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Linearization {
    pub coords: Vec<String>,
    pub jacobian: DMatrix<f64>,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub dynamics: Dynamics,
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    let mut ev: Vec<Complex64> = m.clone().complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

impl Linearization {
    /// Eigenvalues of the principal sub-block on the named coordinates.
    pub fn block(&self, names: &[&str]) -> Result<Vec<Complex64>> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.coords
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| Error::Invalid(format!("unknown coordinate `{n}`")))
            })
            .collect::<Result<_>>()?;
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.jacobian[(idx[i], idx[j])]);
        Ok(sorted_eigenvalues(&sub))
    }
}

/// Jacobian of [`rescaled_field`] at a critical point.
pub fn linearize_at_point(m: &MetricSpec, c: &CompactPhasePoint) -> Result<Linearization> {
    let f0 = rescaled_field(m, c)?;
    let size = f0.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if size > CRITICAL_TOL {
        return Err(Error::NotCritical(size));
    }
    let s0 = compact_state(c);
    let d = s0.len();
    let mut jac = DMatrix::zeros(d, d);
    for j in 0..d {
        let h = default_step(s0[j]);
        for i in 0..d {
            let f = |t: f64| {
                let mut s = s0.clone();
                s[j] = t;
                rescaled_raw(m, &compact_from_state(c, &s)).map(|v| v[i]).unwrap_or(f64::NAN)
            };
            let v = central4(&f, s0[j], h);
            if !v.is_finite() {
                return Err(Error::Step(format!("non-finite Jacobian entry ({i}, {j})")));
            }
            jac[(i, j)] = v;
        }
    }
    let eigenvalues = sorted_eigenvalues(&jac);
    let nonzero: Vec<f64> = eigenvalues.iter().map(|e| e.re).filter(|r| r.abs() > 1e-8).collect();
    let dynamics = if nonzero.is_empty() {
        Dynamics::Degenerate
    } else if nonzero.iter().all(|r| *r > 0.0) {
        Dynamics::Source
    } else if nonzero.iter().all(|r| *r < 0.0) {
        Dynamics::Sink
    } else {
        Dynamics::Saddle
    };
    Ok(Linearization { coords: compact_coordinate_names(c), jacobian: jac, eigenvalues, dynamics })
}
