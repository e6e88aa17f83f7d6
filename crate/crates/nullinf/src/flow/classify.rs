//! Asymptotic classification of trajectories by the radial set they reach.

use serde::{Deserialize, Serialize};

use super::integrate::FlowResult;
use crate::hamiltonian::{CompactPhasePoint, FiberChart, RadialKind};

/// Distance below which a trajectory counts as having reached a radial set.
pub const ARRIVAL_DISTANCE: f64 = 1e-4;
/// Speed below which the arrival counts as converged.
pub const ARRIVAL_SPEED: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    ToRinMinus,
    ToRc,
    ToRout,
    ToRinPlus,
    ExitsChart,
    Undetermined,
}

impl Classification {
    pub fn of_kind(kind: RadialKind) -> Self {
        match kind {
            RadialKind::RinMinus => Classification::ToRinMinus,
            RadialKind::Rc => Classification::ToRc,
            RadialKind::Rout => Classification::ToRout,
            RadialKind::RinPlus => Classification::ToRinPlus,
        }
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

/// Max-norm distance from `c` to each radial set visible in its charts.
pub fn radial_distances(c: &CompactPhasePoint) -> Vec<(RadialKind, f64)> {
    let (rho, x) = (c.base.rho, c.base.x);
    let eta = c.eta_hat();
    let eta_abs = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
    let incoming = if c.base.chart.is_near_i0() { RadialKind::RinMinus } else { RadialKind::RinPlus };
    let mut out = Vec::with_capacity(3);
    match c.fiber {
        FiberChart::ZetaLarge(_) => {
            let xi = c.hat[0];
            out.push((incoming, sup(&[rho, x, xi - 2.0, eta_abs])));
            out.push((RadialKind::Rout, sup(&[x, xi, eta_abs])));
        }
        FiberChart::XiLarge(_) => {
            let zeta = c.hat[0];
            out.push((incoming, sup(&[rho, x, zeta - 0.5, eta_abs])));
            if c.base.chart.is_near_i0() {
                out.push((RadialKind::Rc, sup(&[rho, x, c.rho_inf, zeta, eta_abs - 0.5f64.sqrt()])));
            }
        }
    }
    out
}

/// Classification of a single point with its rescaled speed, if converged.
pub fn classify_point(c: &CompactPhasePoint, speed: f64) -> Option<Classification> {
    if !(speed < ARRIVAL_SPEED) {
        return None;
    }
    radial_distances(c)
        .into_iter()
        .filter(|(_, d)| *d < ARRIVAL_DISTANCE)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| Classification::of_kind(k))
}

/// Classify a finished trajectory from its final point.
pub fn classify_asymptotics(res: &FlowResult) -> Classification {
    if res.exited {
        return Classification::ExitsChart;
    }
    match res.trajectory.last() {
        Some(tp) => classify_point(&tp.point, tp.speed).unwrap_or(Classification::Undetermined),
        None => Classification::Undetermined,
    }
}
