//! Coordinate charts near spacelike infinity and near future timelike infinity.
//!
//! With `t* = t - r`:
//!
//! * `NearI0(T)`: `rho0 = 1/(T - t*)`, `x = sqrt((T - t*)/r)`;
//! * `NearIplus(T)`: `rho+ = 1/(t* - T)`, `x = sqrt((t* - T)/r)`.
//!
//! In both charts `r = 1/(rho x^2)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::sphere::SpherePoint;
use crate::error::{Error, Result};

/// Named chart with its time shift `T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ChartId {
    NearI0 { t_shift: f64 },
    NearIplus { t_shift: f64 },
}

impl ChartId {
    pub fn t_shift(&self) -> f64 {
        match *self {
            ChartId::NearI0 { t_shift } | ChartId::NearIplus { t_shift } => t_shift,
        }
    }

    pub fn is_near_i0(&self) -> bool {
        matches!(self, ChartId::NearI0 { .. })
    }

    /// `+1` for `NearI0`, `-1` for `NearIplus`: `rho = 1/(s (T - t*))`.
    pub fn orientation(&self) -> f64 {
        if self.is_near_i0() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn label(&self) -> &'static str {
        if self.is_near_i0() {
            "NearI0"
        } else {
            "NearIplus"
        }
    }
}

/// A point of the compactified spacetime in a named chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: ChartId,
    /// `rho0` in `NearI0`, `rho+` in `NearIplus`.
    pub rho: f64,
    pub x: f64,
    pub y: SpherePoint,
}

impl ChartPoint {
    pub fn new(chart: ChartId, rho: f64, x: f64, y: SpherePoint) -> Self {
        Self { chart, rho, x, y }
    }

    /// Space dimension `n`.
    pub fn n(&self) -> usize {
        self.y.dim() + 1
    }

    pub fn is_interior(&self) -> bool {
        self.rho > 0.0 && self.rho < 1.0 && self.x > 0.0 && self.x < 1.0
    }

    /// `rho0`, `rho+` as smooth global boundary defining functions restricted
    /// to this chart; the face not meeting the chart contributes 1.
    pub fn rho0_rhoplus(&self) -> (f64, f64) {
        if self.chart.is_near_i0() {
            (self.rho, 1.0)
        } else {
            (1.0, self.rho)
        }
    }
}

/// A point of Minkowski space in polar coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    /// Unit vector in `R^n`.
    pub omega: Vec<f64>,
}

impl SpacetimePoint {
    pub fn t_star(&self) -> f64 {
        self.t - self.r
    }
}

/// Chart coordinates of a spacetime point.
pub fn to_chart(p: &SpacetimePoint, chart: ChartId) -> Result<ChartPoint> {
    if !(p.r > 0.0) || !p.t.is_finite() {
        return Err(Error::Domain(format!("invalid spacetime point (t = {}, r = {})", p.t, p.r)));
    }
    let gap = chart.orientation() * (chart.t_shift() - p.t_star());
    if !(gap > 0.0) {
        return Err(Error::Domain(format!("t* = {} on the wrong side of T = {}", p.t_star(), chart.t_shift())));
    }
    let rho = 1.0 / gap;
    let x = (gap / p.r).sqrt();
    if rho >= 1.0 || x >= 1.0 {
        return Err(Error::Domain(format!("coordinates outside the chart (rho = {rho}, x = {x})")));
    }
    Ok(ChartPoint { chart, rho, x, y: SpherePoint::from_unit(&p.omega)? })
}

/// Spacetime preimage of an interior chart point.
pub fn from_chart(c: &ChartPoint) -> Result<SpacetimePoint> {
    if !c.is_interior() {
        return Err(Error::Domain(format!(
            "({}, rho = {}, x = {}) is not an interior chart point",
            c.chart.label(),
            c.rho,
            c.x
        )));
    }
    let t_star = c.chart.t_shift() - c.chart.orientation() / c.rho;
    let r = 1.0 / (c.rho * c.x * c.x);
    Ok(SpacetimePoint { t: t_star + r, r, omega: c.y.to_unit() })
}

/// Move an interior chart point into another chart through spacetime.
pub fn transition(c: &ChartPoint, target: ChartId) -> Result<ChartPoint> {
    to_chart(&from_chart(c)?, target)
}

/// The edge-b frame `(rho d_rho, x d_x, x d_{y_j})` written in the coordinate
/// basis `(d_{t*}, d_r, d_{y_j})`; row `i` is frame vector `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMatrix {
    pub rows: DMatrix<f64>,
    /// 2-norm condition number.
    pub condition: f64,
}

pub fn eb_frame_in_spacetime(c: &ChartPoint) -> Result<FrameMatrix> {
    if !c.is_interior() {
        return Err(Error::Domain("the edge-b frame is degenerate on the boundary".into()));
    }
    let n = c.n();
    let r = 1.0 / (c.rho * c.x * c.x);
    let s = c.chart.orientation();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    // rho d_rho = (s/rho) d_{t*} - r d_r and x d_x = -2 r d_r
    m[(0, 0)] = s / c.rho;
    m[(0, 1)] = -r;
    m[(1, 1)] = -2.0 * r;
    for j in 0..n - 1 {
        m[(2 + j, 2 + j)] = c.x;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let condition = sv.max() / sv.min();
    Ok(FrameMatrix { rows: m, condition })
}
