//! Background metrics and their rescaled dual metrics in the edge-b frame.
//!
//! Matrices are indexed in the frame order `(rho d_rho, x d_x, x d_{y_j})`,
//! i.e. on covectors `zeta drho/rho + xi dx/x + eta_j dy^j/x` the index order is
//! `(zeta, xi, eta_1, ..)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chart::ChartPoint;
use super::expr::{Expr, ExprEnv};
use crate::error::{Error, Result};

/// Declared decay orders `(l0, lI, l+)` of a perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayOrders {
    pub l0: f64,
    pub l_i: f64,
    pub l_plus: f64,
}

impl DecayOrders {
    pub fn validate(&self) -> Result<()> {
        let ok = self.l0 > 0.0 && self.l0 <= 1.0 && self.l_plus > 0.0 && self.l_plus <= 1.0 && self.l_i > 0.0 && self.l_i <= 0.5;
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "decay orders must satisfy l0, l+ in (0,1] and lI in (0,1/2], got {self:?}"
            )))
        }
    }
}

/// One coefficient `h_{row col}` added to the rescaled metric in the edge-b
/// coframe (and mirrored to `h_{col row}`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTerm {
    pub row: usize,
    pub col: usize,
    pub coefficient: Expr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub orders: DecayOrders,
    pub terms: Vec<PerturbationTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricKind {
    /// Minkowski metric with the round sphere metric.
    Minkowski,
    /// `-(1 - 2m/r) dx0 dx1 + r^2 g_sphere` with `x0 = t*`, `x1 = t* + 2r`.
    Schwarzschild { mass: f64 },
    /// The frozen-coefficient model at null infinity: the boundary value of the
    /// Minkowski form with flat sphere coefficients. `p1` enters only operators.
    ModelP1 { p1: f64 },
    /// Minkowski plus coframe coefficients with declared decay orders.
    Perturbation(Perturbation),
}

/// Background metric on `R^{1+n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub kind: MetricKind,
    /// Space dimension, at least 2.
    pub n: usize,
}

impl MetricSpec {
    pub fn minkowski(n: usize) -> Self {
        Self { kind: MetricKind::Minkowski, n }
    }

    pub fn schwarzschild(n: usize, mass: f64) -> Self {
        Self { kind: MetricKind::Schwarzschild { mass }, n }
    }

    pub fn model(n: usize, p1: f64) -> Self {
        Self { kind: MetricKind::ModelP1 { p1 }, n }
    }

    pub fn perturbation(n: usize, p: Perturbation) -> Self {
        Self { kind: MetricKind::Perturbation(p), n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Invalid(format!("space dimension n = {} < 2", self.n)));
        }
        match &self.kind {
            MetricKind::Schwarzschild { mass } if !mass.is_finite() || *mass < 0.0 => {
                Err(Error::Invalid(format!("Schwarzschild mass {mass} must be finite and >= 0")))
            }
            MetricKind::Perturbation(p) => {
                p.orders.validate()?;
                for t in &p.terms {
                    if t.row > self.n || t.col > self.n {
                        return Err(Error::Invalid(format!("frame index ({}, {}) out of range", t.row, t.col)));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `p1` of the model operator (0 for the other kinds).
    pub fn p1(&self) -> f64 {
        match self.kind {
            MetricKind::ModelP1 { p1 } => p1,
            _ => 0.0,
        }
    }
}

fn check_point(m: &MetricSpec, c: &ChartPoint) -> Result<()> {
    m.validate()?;
    if c.n() != m.n {
        return Err(Error::Invalid(format!("point has n = {}, metric has n = {}", c.n(), m.n)));
    }
    if !(c.rho >= 0.0 && c.x >= 0.0 && c.rho.is_finite() && c.x.is_finite()) {
        return Err(Error::Domain(format!("rho = {}, x = {} must be finite and >= 0", c.rho, c.x)));
    }
    Ok(())
}

/// Minkowski `(zeta, xi)` block of the rescaled dual metric, without the
/// `x^2` correction when `model` is set.
fn minkowski_dual_2d(c: &ChartPoint, model: bool) -> [[f64; 2]; 2] {
    let corr = if model { 0.0 } else { 0.25 * c.x * c.x };
    if c.chart.is_near_i0() {
        [[0.0, 0.5], [0.5, -0.5 + corr]]
    } else {
        [[0.0, -0.5], [-0.5, 0.5 + corr]]
    }
}

/// `F = 1 - 2m/r` for the Schwarzschild kind, 1 otherwise.
pub fn lapse(m: &MetricSpec, c: &ChartPoint) -> f64 {
    match m.kind {
        MetricKind::Schwarzschild { mass } => 1.0 - 2.0 * mass * c.rho * c.x * c.x,
        _ => 1.0,
    }
}

fn dual_closed_form(m: &MetricSpec, c: &ChartPoint) -> Result<DMatrix<f64>> {
    let n = m.n;
    let model = matches!(m.kind, MetricKind::ModelP1 { .. });
    let f = lapse(m, c);
    if !(f > 0.0) {
        return Err(Error::Domain(format!("1 - 2m/r = {f} is not positive")));
    }
    let b = minkowski_dual_2d(c, model);
    let mut g = DMatrix::zeros(n + 1, n + 1);
    for i in 0..2 {
        for j in 0..2 {
            g[(i, j)] = b[i][j] / f;
        }
    }
    let k = if model { 1.0 } else { c.y.inverse_metric_factor() };
    for j in 0..n - 1 {
        g[(2 + j, 2 + j)] = k;
    }
    Ok(g)
}

fn perturbation_matrix(p: &Perturbation, c: &ChartPoint, n: usize) -> DMatrix<f64> {
    let (rho0, rhoplus) = c.rho0_rhoplus();
    let env = ExprEnv { rho: c.rho, rho0, rhoplus, x: c.x };
    let mut h = DMatrix::zeros(n + 1, n + 1);
    for t in &p.terms {
        let v = t.coefficient.eval(&env);
        h[(t.row, t.col)] += v;
        if t.row != t.col {
            h[(t.col, t.row)] += v;
        }
    }
    h
}

/// Rescaled dual metric `G_eb = (rho0 x rho+)^{-2} g^{-1}` in the edge-b frame.
pub fn dual_metric_eb(m: &MetricSpec, c: &ChartPoint) -> Result<DMatrix<f64>> {
    check_point(m, c)?;
    dual_metric_raw(m, c)
}

/// [`dual_metric_eb`] without the sign checks on `rho` and `x`, for
/// difference quotients that straddle a boundary face.
pub(crate) fn dual_metric_raw(m: &MetricSpec, c: &ChartPoint) -> Result<DMatrix<f64>> {
    match &m.kind {
        MetricKind::Perturbation(_) => {
            let g = covariant_metric_raw(m, c)?;
            g.try_inverse().ok_or_else(|| Error::Domain("perturbed metric is degenerate".into()))
        }
        _ => dual_closed_form(m, c),
    }
}

/// Rescaled metric `(rho0 x rho+)^2 g` in the edge-b coframe.
pub fn covariant_metric_eb(m: &MetricSpec, c: &ChartPoint) -> Result<DMatrix<f64>> {
    check_point(m, c)?;
    covariant_metric_raw(m, c)
}

pub(crate) fn covariant_metric_raw(m: &MetricSpec, c: &ChartPoint) -> Result<DMatrix<f64>> {
    match &m.kind {
        MetricKind::Perturbation(p) => {
            let base = dual_closed_form(&MetricSpec::minkowski(m.n), c)?;
            let g0 = base.try_inverse().ok_or_else(|| Error::Domain("degenerate Minkowski form".into()))?;
            Ok(g0 + perturbation_matrix(p, c, m.n))
        }
        _ => dual_closed_form(m, c)?
            .try_inverse()
            .ok_or_else(|| Error::Domain("degenerate dual metric".into())),
    }
}

/// `G(w, w)` for a covector `w = (zeta, xi, eta..)`.
pub fn quadratic_form(g: &DMatrix<f64>, w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..w.len() {
        for j in 0..w.len() {
            acc += g[(i, j)] * w[i] * w[j];
        }
    }
    acc
}

/// Numbers of negative and positive eigenvalues (zero eigenvalues are
/// counted in neither).
pub fn signature(g: &DMatrix<f64>) -> (usize, usize) {
    let eig = g.clone().symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let neg = eig.eigenvalues.iter().filter(|v| **v < -1e-14 * scale).count();
    let pos = eig.eigenvalues.iter().filter(|v| **v > 1e-14 * scale).count();
    (neg, pos)
}
