//! Points of the edge-b cotangent bundle and its fiber compactification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChartPoint;

/// A covector `zeta drho/rho + xi dx/x + eta_j dy^j/x` over a chart point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub base: ChartPoint,
    pub xi: f64,
    pub eta: Vec<f64>,
    pub zeta: f64,
}

impl PhasePoint {
    pub fn new(base: ChartPoint, zeta: f64, xi: f64, eta: Vec<f64>) -> Self {
        Self { base, xi, eta, zeta }
    }

    /// Components in frame order `(zeta, xi, eta..)`.
    pub fn covector(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.eta.len() + 2);
        w.push(self.zeta);
        w.push(self.xi);
        w.extend_from_slice(&self.eta);
        w
    }

    pub fn from_covector(base: ChartPoint, w: &[f64]) -> Self {
        Self { base, zeta: w[0], xi: w[1], eta: w[2..].to_vec() }
    }

    pub fn fiber_norm(&self) -> f64 {
        self.covector().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Sign of the leading fiber coordinate in a fiber chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(v: f64) -> Self {
        if v >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Projective fiber charts near fiber infinity.
///
/// * `ZetaLarge`: `rho_inf = 1/|zeta|`, hats `(xi/zeta, eta/zeta)`;
/// * `XiLarge`: `rho_inf = 1/|xi|`, hats `(zeta/xi, eta/xi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberChart {
    ZetaLarge(Sign),
    XiLarge(Sign),
}

impl FiberChart {
    pub fn sign(self) -> Sign {
        match self {
            FiberChart::ZetaLarge(s) | FiberChart::XiLarge(s) => s,
        }
    }
}

/// Hats beyond this magnitude leave the fiber chart's validity region.
pub const HAT_LIMIT: f64 = 1e6;
/// Hand-off from `ZetaLarge` to `XiLarge` above this `|xi_hat|`.
pub const HANDOFF_UP: f64 = 3.0;
/// Hand-off from `XiLarge` back to `ZetaLarge` when `|xi_hat|` drops below this.
pub const HANDOFF_DOWN: f64 = 2.5;

/// A point of the fiber-compactified edge-b cotangent bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactPhasePoint {
    pub base: ChartPoint,
    pub fiber: FiberChart,
    /// 0 exactly at fiber infinity.
    pub rho_inf: f64,
    /// `(xi_hat, eta_hat..)` in `ZetaLarge`, `(zeta_hat, eta_hat..)` in `XiLarge`.
    pub hat: Vec<f64>,
}

impl CompactPhasePoint {
    pub fn new(base: ChartPoint, fiber: FiberChart, rho_inf: f64, hat: Vec<f64>) -> Self {
        Self { base, fiber, rho_inf, hat }
    }

    /// The representative covector on the unit level set of the leading
    /// coordinate, in frame order `(zeta, xi, eta..)`.
    pub fn unit_covector(&self) -> Vec<f64> {
        let s = self.fiber.sign().value();
        let mut w = Vec::with_capacity(self.hat.len() + 1);
        match self.fiber {
            FiberChart::ZetaLarge(_) => {
                w.push(s);
                w.push(s * self.hat[0]);
            }
            FiberChart::XiLarge(_) => {
                w.push(s * self.hat[0]);
                w.push(s);
            }
        }
        w.extend(self.hat[1..].iter().map(|v| s * v));
        w
    }

    pub fn eta_hat(&self) -> &[f64] {
        &self.hat[1..]
    }

    /// `xi/zeta`, possibly infinite.
    pub fn xi_over_zeta(&self) -> f64 {
        match self.fiber {
            FiberChart::ZetaLarge(_) => self.hat[0],
            FiberChart::XiLarge(_) => 1.0 / self.hat[0],
        }
    }

    pub fn check_hats(&self) -> Result<()> {
        if self.hat.iter().all(|v| v.is_finite() && v.abs() <= HAT_LIMIT) && self.rho_inf >= 0.0 {
            Ok(())
        } else {
            Err(Error::FiberChart(format!("hat coordinates {:?} outside the chart", self.hat)))
        }
    }

    /// Compactify a covector; `ZetaLarge` is chosen when `|xi/zeta| <= 3`.
    pub fn from_phase(p: &PhasePoint) -> Result<Self> {
        let w = p.covector();
        Self::from_covector(p.base.clone(), &w, 1.0)
    }

    /// Compactify the covector `w / scale`; `scale = 0` puts the point at
    /// fiber infinity in the direction of `w`.
    pub fn from_covector(base: ChartPoint, w: &[f64], scale: f64) -> Result<Self> {
        let (zeta, xi) = (w[0], w[1]);
        if w.iter().all(|v| *v == 0.0) {
            return Err(Error::Domain("zero covector has no fiber-compactified image".into()));
        }
        let use_zeta = zeta != 0.0 && xi.abs() <= HANDOFF_UP * zeta.abs();
        let out = if use_zeta {
            let mut hat = vec![xi / zeta];
            hat.extend(w[2..].iter().map(|v| v / zeta));
            Self { base, fiber: FiberChart::ZetaLarge(Sign::of(zeta)), rho_inf: scale / zeta.abs(), hat }
        } else {
            let mut hat = vec![zeta / xi];
            hat.extend(w[2..].iter().map(|v| v / xi));
            Self { base, fiber: FiberChart::XiLarge(Sign::of(xi)), rho_inf: scale / xi.abs(), hat }
        };
        out.check_hats()?;
        Ok(out)
    }

    /// Re-express in the other fiber chart (requires a nonzero pivot).
    pub fn switch_fiber_chart(&self) -> Result<Self> {
        let w = self.unit_covector();
        let (pivot, fiber, hat) = match self.fiber {
            FiberChart::ZetaLarge(_) => {
                let xi = w[1];
                if xi == 0.0 {
                    return Err(Error::FiberChart("xi = 0 has no XiLarge image".into()));
                }
                let mut hat = vec![w[0] / xi];
                hat.extend(w[2..].iter().map(|v| v / xi));
                (xi, FiberChart::XiLarge(Sign::of(xi)), hat)
            }
            FiberChart::XiLarge(_) => {
                let zeta = w[0];
                if zeta == 0.0 {
                    return Err(Error::FiberChart("zeta = 0 has no ZetaLarge image".into()));
                }
                let mut hat = vec![w[1] / zeta];
                hat.extend(w[2..].iter().map(|v| v / zeta));
                (zeta, FiberChart::ZetaLarge(Sign::of(zeta)), hat)
            }
        };
        let out = Self { base: self.base.clone(), fiber, rho_inf: self.rho_inf / pivot.abs(), hat };
        out.check_hats()?;
        Ok(out)
    }

    /// The finite covector; fails at fiber infinity.
    pub fn to_phase(&self) -> Result<PhasePoint> {
        if !(self.rho_inf > 0.0) {
            return Err(Error::Domain("point at fiber infinity has no finite covector".into()));
        }
        let w: Vec<f64> = self.unit_covector().iter().map(|v| v / self.rho_inf).collect();
        Ok(PhasePoint::from_covector(self.base.clone(), &w))
    }
}
