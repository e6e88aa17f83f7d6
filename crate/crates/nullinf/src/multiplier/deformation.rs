//! Deformation tensors `K_V = pi - g^{-1} tr_g(pi) / 2`, `pi = -L_V g^{-1}`,
//! with the first-order term of the model operator, in the edge-b frame.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::field::MultiplierField;
use crate::error::{Error, Result};
use crate::geometry::metric::dual_metric_raw;
use crate::geometry::{ChartPoint, MetricKind, MetricSpec};

/// Weight-stripped symmetric tensor on covectors in frame order
/// `(rho d_rho, x d_x, x d_{y_j})`; the full tensor is
/// `rho^{weights.0} x^{weights.1}` times `matrix`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationTensor {
    pub matrix: DMatrix<f64>,
    pub weights: (f64, f64),
}

impl DeformationTensor {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigen().eigenvalues.min()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigen().eigenvalues.max()
    }
}

/// Closed form at null infinity for the frozen model metric with scalar `p1`.
pub fn deformation_tensor_symbolic(n: usize, mult: &MultiplierField, p1: f64) -> Result<DeformationTensor> {
    mult.validate()?;
    if n < 2 {
        return Err(Error::Invalid(format!("space dimension n = {n} < 2")));
    }
    let (a0, ai, ap, c, l) = (mult.check_alpha0, mult.check_alpha_i, mult.check_alpha_plus, mult.c, p1);
    let nn = n as f64;
    let (rr, rx, xx, yy) = if mult.chart.is_near_i0() {
        (
            (2.0 - c) * (-4.0 * ai + 4.0 * l),
            4.0 * ai - 4.0 * l + 0.5 * c * (-nn + 1.0 - 4.0 * ai + 2.0 * l),
            -2.0 * ai + 2.0 * l + 0.5 * c * (nn - 1.0 + 2.0 * a0),
            2.0 - 4.0 * ai + 4.0 * a0 + c * (-nn + 1.0 - 2.0 * a0),
        )
    } else {
        (
            (2.0 + c) * (-4.0 * ai + 4.0 * l),
            4.0 * ai - 4.0 * l + 0.5 * c * (nn - 1.0 + 4.0 * ai - 2.0 * l),
            -2.0 * ai + 2.0 * l + 0.5 * c * (-nn + 1.0 - 2.0 * ap),
            -2.0 + 4.0 * ai - 4.0 * ap + c * (-nn + 1.0 - 2.0 * ap),
        )
    };
    let mut k = DMatrix::zeros(n + 1, n + 1);
    k[(0, 0)] = rr;
    k[(0, 1)] = rx;
    k[(1, 0)] = rx;
    k[(1, 1)] = xx;
    for j in 2..=n {
        k[(j, j)] = yy;
    }
    Ok(DeformationTensor { matrix: k, weights: mult.tensor_weight_exponents() })
}

/// Coordinate components of `g^{-1}` in `(d_rho, d_x, d_y)`.
fn inverse_metric_coords(m: &MetricSpec, c: &ChartPoint) -> Result<DMatrix<f64>> {
    let g = dual_metric_raw(m, c)?;
    let n = c.n();
    let w = c.rho * c.rho * c.x * c.x;
    let e: Vec<f64> = (0..=n).map(|i| if i == 0 { c.rho } else { c.x }).collect();
    Ok(DMatrix::from_fn(n + 1, n + 1, |i, j| w * e[i] * g[(i, j)] * e[j]))
}

/// First-order operator contribution, weight-stripped.
fn p1_term(mult: &MultiplierField, n: usize, p1: f64) -> DMatrix<f64> {
    // sigma(Q) ~ x d_x - 2 rho d_rho
    let q = [-2.0, 1.0];
    let a = mult.w_components();
    let sign = if mult.chart.is_near_i0() { -1.0 } else { 1.0 };
    let mut t = DMatrix::zeros(n + 1, n + 1);
    for i in 0..2 {
        for j in 0..2 {
            t[(i, j)] = sign * 2.0 * p1 * 0.5 * (q[i] * a[j] + q[j] * a[i]);
        }
    }
    t
}

/// Lie-derivative path: fourth-order differences of `g^{-1}` along `V`.
pub fn deformation_tensor_fd(m: &MetricSpec, mult: &MultiplierField, p: &ChartPoint, p1: f64) -> Result<DeformationTensor> {
    mult.validate()?;
    if p.chart != mult.chart {
        return Err(Error::Invalid("multiplier and point use different charts".into()));
    }
    if !p.is_interior() {
        return Err(Error::Domain("finite differences need an interior point".into()));
    }
    let n = p.n();
    let dim = n + 1;
    let (pr, px) = mult.weight_exponents();
    let wc = mult.w_components();
    let (rho, x) = (p.rho, p.x);
    let wv = rho.powf(pr) * x.powf(px);
    let vr = wv * wc[0] * rho;
    let vx = wv * wc[1] * x;
    // d_c V^a for c, a in {rho, x}
    let dv = [
        [wv * wc[0] * (pr + 1.0), wv * wc[1] * x * pr / rho],
        [wv * wc[0] * rho * px / x, wv * wc[1] * (px + 1.0)],
    ];
    let ginv = inverse_metric_coords(m, p)?;
    let speed = (vr / rho).abs().max((vx / x).abs());
    let h = 2e-3 / speed;
    let at = |t: f64| -> Result<DMatrix<f64>> {
        let q = ChartPoint { rho: rho + t * vr, x: x + t * vx, ..p.clone() };
        inverse_metric_coords(m, &q)
    };
    let (m2, m1, p1g, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
    let vdg = (&m2 - &p2 + (&p1g - &m1) * 8.0) / (12.0 * h);
    let mut pi = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut lie = vdg[(a, b)];
            for cc in 0..2 {
                if a < 2 {
                    lie -= ginv[(cc, b)] * dv[cc][a];
                }
                if b < 2 {
                    lie -= ginv[(a, cc)] * dv[cc][b];
                }
            }
            pi[(a, b)] = -lie;
        }
    }
    let g = ginv
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Step("degenerate metric in the Lie derivative".into()))?;
    let tr = (&g * &pi).trace();
    let k = &pi - &ginv * (0.5 * tr);
    let e: Vec<f64> = (0..dim).map(|i| if i == 0 { rho } else { x }).collect();
    let (wa, wb) = mult.tensor_weight_exponents();
    let strip = rho.powf(wa) * x.powf(wb);
    let mut frame = DMatrix::from_fn(dim, dim, |i, j| k[(i, j)] / (e[i] * e[j] * strip));
    frame = (&frame + frame.transpose()) * 0.5;
    frame += p1_term(mult, n, p1);
    if frame.iter().any(|v| !v.is_finite()) {
        return Err(Error::Step("non-finite Lie derivative".into()));
    }
    Ok(DeformationTensor { matrix: frame, weights: (wa, wb) })
}

/// Closed form for the model metric, finite differences otherwise.
pub fn deformation_tensor(m: &MetricSpec, mult: &MultiplierField, p: &ChartPoint, p1: f64) -> Result<DeformationTensor> {
    m.validate()?;
    match m.kind {
        MetricKind::ModelP1 { .. } => deformation_tensor_symbolic(m.n, mult, p1),
        _ => deformation_tensor_fd(m, mult, p, p1),
    }
}

/// Trace and determinant of the `(d rho / rho, d x / x)` minor.
pub fn minor_trace_det(k: &DeformationTensor) -> (f64, f64) {
    let m = &k.matrix;
    (m[(0, 0)] + m[(1, 1)], m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)])
}

/// `d det / d c` at `c = 0` of the model minor, from two evaluations and
/// Richardson extrapolation.
pub fn determinant_slope(n: usize, mult: &MultiplierField, p1: f64, c: f64) -> Result<f64> {
    let at = |cc: f64| -> Result<f64> {
        let f = MultiplierField { c: cc, ..*mult };
        Ok(minor_trace_det(&deformation_tensor_symbolic(n, &f, p1)?).1 / cc)
    };
    Ok(2.0 * at(0.5 * c)? - at(c)?)
}
