//! Radial sets of the rescaled Hamiltonian flow over null infinity.

use serde::{Deserialize, Serialize};

use super::phase::{CompactPhasePoint, FiberChart, Sign};
use crate::geometry::{ChartId, ChartPoint, SpherePoint};

/// The four radial sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadialKind {
    /// Over the corner of spatial and null infinity: `xi = 2 zeta`, `eta = 0`.
    RinMinus,
    /// Over the same corner at `zeta = 0`, `xi^2 = 2|eta|^2`.
    Rc,
    /// Over null infinity: `xi = 0`, `eta = 0`.
    Rout,
    /// Over the corner of null and future timelike infinity: `xi = 2 zeta`, `eta = 0`.
    RinPlus,
}

/// A radial set together with its component of the characteristic set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RadialSetId {
    pub kind: RadialKind,
    /// `Plus` for the future component.
    pub component: Sign,
}

impl RadialSetId {
    pub fn new(kind: RadialKind, component: Sign) -> Self {
        Self { kind, component }
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            RadialKind::RinMinus => "R_in-",
            RadialKind::Rc => "R_c",
            RadialKind::Rout => "R_out",
            RadialKind::RinPlus => "R_in+",
        };
        let s = match self.component {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        format!("{k}^{s}")
    }

    /// The chart in which the set's boundary image is naturally described.
    pub fn home_chart(&self) -> ChartId {
        match self.kind {
            RadialKind::RinPlus => ChartId::NearIplus { t_shift: 0.0 },
            _ => ChartId::NearI0 { t_shift: 0.0 },
        }
    }

    /// Coordinates spanning the block of the linearization that carries the
    /// dynamics of the set, for `n - 1` angular directions.
    pub fn linearization_block(&self, n: usize) -> Vec<String> {
        let etas = (1..n).map(|j| format!("eta_hat{j}"));
        match self.kind {
            RadialKind::RinMinus | RadialKind::RinPlus => ["rho", "x"].iter().map(|s| s.to_string()).chain(etas).collect(),
            RadialKind::Rout => std::iter::once("x".to_string()).chain(etas).collect(),
            RadialKind::Rc => ["rho_inf", "rho", "x", "zeta_hat"].iter().map(|s| s.to_string()).collect(),
        }
    }

    /// A point of the set at fiber infinity, over `y = 0`, written in `chart`.
    /// Returns `None` when the set does not meet the chart over null infinity.
    pub fn boundary_point(&self, chart: ChartId, n: usize, rho: f64) -> Option<CompactPhasePoint> {
        let base = ChartPoint::new(chart, rho, 0.0, SpherePoint::north_pole(n - 1));
        let k = n - 1;
        let plus = self.component == Sign::Plus;
        let sgn = |p: bool| if p { Sign::Plus } else { Sign::Minus };
        let near_i0 = chart.is_near_i0();
        match (self.kind, near_i0) {
            (RadialKind::RinMinus, true) => {
                let mut hat = vec![2.0];
                hat.extend(vec![0.0; k]);
                Some(CompactPhasePoint::new(ChartPoint { rho: 0.0, ..base }, FiberChart::ZetaLarge(sgn(plus)), 0.0, hat))
            }
            (RadialKind::Rc, true) => {
                let mut hat = vec![0.0];
                hat.push(0.5f64.sqrt());
                hat.extend(vec![0.0; k - 1]);
                Some(CompactPhasePoint::new(ChartPoint { rho: 0.0, ..base }, FiberChart::XiLarge(sgn(plus)), 0.0, hat))
            }
            (RadialKind::Rout, _) => {
                // future component: zeta < 0 near spatial infinity, zeta > 0 near timelike infinity
                let zeta_positive = if near_i0 { !plus } else { plus };
                let hat = vec![0.0; k + 1];
                Some(CompactPhasePoint::new(base, FiberChart::ZetaLarge(sgn(zeta_positive)), 0.0, hat))
            }
            (RadialKind::RinPlus, false) => {
                let mut hat = vec![2.0];
                hat.extend(vec![0.0; k]);
                Some(CompactPhasePoint::new(ChartPoint { rho: 0.0, ..base }, FiberChart::ZetaLarge(sgn(plus)), 0.0, hat))
            }
            _ => None,
        }
    }
}
