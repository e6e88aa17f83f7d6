//! Phase portrait of the future characteristic set over one fiber of null
//! infinity, compared with the classification predicted by the explicit flows.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::Classification;
use super::integrate::{integrate_flow, Direction, FlowParams};
use crate::error::{Error, Result};
use crate::geometry::{ChartId, ChartPoint, MetricSpec, SpherePoint};
use crate::hamiltonian::CompactPhasePoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct PortraitSpec {
    pub n: usize,
    /// Starting `rho` values near spatial infinity.
    pub rho_values: Vec<f64>,
    /// Number of `zeta/xi` samples in `(0, 1/2)`.
    pub inner_count: usize,
    /// Number of `zeta/xi` samples in `(-inf, 0)`.
    pub outer_count: usize,
    /// Number of angular directions for `eta`.
    pub eta_directions: usize,
    pub params: FlowParams,
}

impl Default for PortraitSpec {
    fn default() -> Self {
        Self {
            n: 2,
            rho_values: vec![0.0, 0.05, 0.3],
            inner_count: 6,
            outer_count: 5,
            eta_directions: 2,
            params: FlowParams { record: false, ..Default::default() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitEntry {
    pub rho0: f64,
    /// `zeta/xi` of the start.
    pub zeta_over_xi: f64,
    pub eta_direction: Vec<f64>,
    pub forward: Classification,
    pub backward: Classification,
    pub expected_forward: Classification,
    pub expected_backward: Classification,
}

impl PortraitEntry {
    pub fn matches(&self) -> bool {
        self.forward == self.expected_forward && self.backward == self.expected_backward
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitReport {
    pub entries: Vec<PortraitEntry>,
    /// Counts of `backward -> forward` connections.
    pub connections: BTreeMap<String, usize>,
    pub mismatches: usize,
}

/// Limits predicted by the explicit model flows for a start on the future
/// characteristic set at fiber infinity over `x = 0`.
pub fn expected_classification(rho0: f64, zeta_over_xi: f64, dir: Direction) -> Classification {
    let on_incoming = (zeta_over_xi - 0.5).abs() < 1e-12;
    match dir {
        Direction::Forward => {
            if rho0 == 0.0 {
                if zeta_over_xi > 0.0 {
                    Classification::ToRinMinus
                } else {
                    Classification::ToRout
                }
            } else if on_incoming {
                Classification::ToRinPlus
            } else {
                Classification::ToRout
            }
        }
        Direction::Backward => {
            if on_incoming {
                Classification::ToRinMinus
            } else {
                Classification::ToRc
            }
        }
    }
}

fn eta_directions(k: usize, count: usize) -> Vec<Vec<f64>> {
    if k == 1 {
        return [1.0, -1.0].iter().take(count.clamp(1, 2)).map(|s| vec![*s]).collect();
    }
    (0..count.max(1))
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / count.max(1) as f64;
            let mut e = vec![0.0; k];
            e[0] = a.cos();
            e[1] = a.sin();
            e
        })
        .collect()
}

/// `zeta/xi` sample values in `(-inf, 1/2]`.
fn ratio_samples(inner: usize, outer: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=inner).map(|i| 0.5 * i as f64 / (inner + 1) as f64).collect();
    v.extend((1..=outer).map(|i| -(std::f64::consts::FRAC_PI_2 * i as f64 / (outer + 1) as f64).tan()));
    v.push(0.0);
    v.push(0.5);
    v
}

/// A start on the future characteristic set over `x = 0` at fiber infinity.
pub fn portrait_start(n: usize, rho0: f64, zeta_over_xi: f64, eta_dir: &[f64]) -> Result<CompactPhasePoint> {
    if zeta_over_xi > 0.5 {
        return Err(Error::Domain("zeta/xi > 1/2 is not on the future characteristic set".into()));
    }
    let base = ChartPoint::new(ChartId::NearI0 { t_shift: 0.0 }, rho0, 0.0, SpherePoint::north_pole(n - 1));
    let len = (0.5 - zeta_over_xi).sqrt();
    let mut w = vec![zeta_over_xi, 1.0];
    w.extend(eta_dir.iter().map(|e| e * len));
    CompactPhasePoint::from_covector(base, &w, 0.0)
}

/// Integrate forward and backward from every start of the grid.
pub fn phase_portrait(m: &MetricSpec, spec: &PortraitSpec) -> Result<PortraitReport> {
    if spec.n != m.n {
        return Err(Error::Invalid("portrait dimension differs from the metric".into()));
    }
    let mut jobs = Vec::new();
    for &rho0 in &spec.rho_values {
        for r in ratio_samples(spec.inner_count, spec.outer_count) {
            // the radial sets themselves are not trajectories
            if rho0 == 0.0 && (r == 0.0 || r == 0.5) {
                continue;
            }
            for e in eta_directions(spec.n - 1, spec.eta_directions) {
                if r == 0.5 && e != eta_directions(spec.n - 1, 1)[0] {
                    continue;
                }
                jobs.push((rho0, r, e));
            }
        }
    }
    let entries: Vec<PortraitEntry> = jobs
        .par_iter()
        .map(|(rho0, r, e)| -> Result<PortraitEntry> {
            let start = portrait_start(spec.n, *rho0, *r, e)?;
            let fw = FlowParams { direction: Direction::Forward, ..spec.params.clone() };
            let bw = FlowParams { direction: Direction::Backward, ..spec.params.clone() };
            Ok(PortraitEntry {
                rho0: *rho0,
                zeta_over_xi: *r,
                eta_direction: e.clone(),
                forward: integrate_flow(m, &start, &fw)?.classification,
                backward: integrate_flow(m, &start, &bw)?.classification,
                expected_forward: expected_classification(*rho0, *r, Direction::Forward),
                expected_backward: expected_classification(*rho0, *r, Direction::Backward),
            })
        })
        .collect::<Result<_>>()?;
    let mut connections = BTreeMap::new();
    for e in &entries {
        *connections.entry(format!("{:?} -> {:?}", e.backward, e.forward)).or_insert(0) += 1;
    }
    let mismatches = entries.iter().filter(|e| !e.matches()).count();
    Ok(PortraitReport { entries, connections, mismatches })
}
