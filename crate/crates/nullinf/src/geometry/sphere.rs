//! Stereographic-pair atlas on the unit sphere `S^{n-1}`.
//!
//! Coordinates are twice the standard stereographic coordinates, so the round
//! metric reads `|dy|^2 / (1 + |y|^2/4)^2` and the equator is `|y| = 2`.
//! The north chart projects from the south pole and covers everything but the
//! south pole; the south chart is the mirror image. Both charts are related by
//! the inversion `y' = 4 y / |y|^2`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which stereographic chart a sphere point is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hemisphere {
    North,
    South,
}

impl Hemisphere {
    pub fn other(self) -> Self {
        match self {
            Hemisphere::North => Hemisphere::South,
            Hemisphere::South => Hemisphere::North,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Hemisphere::North => 1.0,
            Hemisphere::South => -1.0,
        }
    }
}

/// A point of `S^{n-1}` in one of the two stereographic charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub hemisphere: Hemisphere,
    /// Scaled stereographic coordinates, `n - 1` of them.
    pub y: Vec<f64>,
}

/// Radius beyond which [`SpherePoint::canonical`] hands off to the other chart.
pub const HANDOFF_RADIUS: f64 = 2.2;

impl SpherePoint {
    /// The centre `y = 0` of the north chart on `S^{dim}`.
    pub fn north_pole(dim: usize) -> Self {
        Self { hemisphere: Hemisphere::North, y: vec![0.0; dim] }
    }

    pub fn new(hemisphere: Hemisphere, y: Vec<f64>) -> Self {
        Self { hemisphere, y }
    }

    /// Number of sphere coordinates (`n - 1`).
    pub fn dim(&self) -> usize {
        self.y.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum()
    }

    /// `(1 + |y|^2/4)^2`: the inverse round metric is this multiple of the identity.
    pub fn inverse_metric_factor(&self) -> f64 {
        let f = 1.0 + 0.25 * self.norm_sq();
        f * f
    }

    /// Gradient of [`Self::inverse_metric_factor`] in `y`.
    pub fn inverse_metric_factor_grad(&self) -> Vec<f64> {
        let f = 1.0 + 0.25 * self.norm_sq();
        self.y.iter().map(|v| f * v).collect()
    }

    /// Point from a unit vector `omega` in `R^n`; picks the chart whose centre
    /// is nearer.
    pub fn from_unit(omega: &[f64]) -> Result<Self> {
        let n = omega.len();
        if n < 2 {
            return Err(Error::Invalid("sphere needs ambient dimension >= 2".into()));
        }
        let norm: f64 = omega.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!("omega is not a unit vector (|omega| = {norm})")));
        }
        let last = omega[n - 1];
        let hemisphere = if last >= 0.0 { Hemisphere::North } else { Hemisphere::South };
        let denom = 1.0 + hemisphere.sign() * last;
        let y = omega[..n - 1].iter().map(|w| 2.0 * w / denom).collect();
        Ok(Self { hemisphere, y })
    }

    /// The unit vector in `R^n`.
    pub fn to_unit(&self) -> Vec<f64> {
        let s = 0.25 * self.norm_sq();
        let mut out: Vec<f64> = self.y.iter().map(|v| v / (1.0 + s)).collect();
        out.push(self.hemisphere.sign() * (1.0 - s) / (1.0 + s));
        out
    }

    /// The same point in the other chart, with the Jacobian `dy'/dy`.
    pub fn switch_chart(&self) -> Result<(SpherePoint, DMatrix<f64>)> {
        let r2 = self.norm_sq();
        if r2 == 0.0 {
            return Err(Error::Domain("chart centre has no image in the other chart".into()));
        }
        let d = self.dim();
        let y2: Vec<f64> = self.y.iter().map(|v| 4.0 * v / r2).collect();
        let mut jac = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let delta = if i == j { 1.0 } else { 0.0 };
                jac[(i, j)] = 4.0 * (delta / r2 - 2.0 * self.y[i] * self.y[j] / (r2 * r2));
            }
        }
        Ok((SpherePoint { hemisphere: self.hemisphere.other(), y: y2 }, jac))
    }

    /// Whether the point lies beyond the hand-off radius.
    pub fn needs_handoff(&self) -> bool {
        self.norm_sq() > HANDOFF_RADIUS * HANDOFF_RADIUS
    }
}
