//! Numerical fits of the decay orders of a metric relative to Minkowski.

use serde::{Deserialize, Serialize};

use super::chart::{ChartId, ChartPoint};
use super::metric::{covariant_metric_eb, MetricSpec};
use super::sphere::SpherePoint;
use crate::error::{Error, Result};
use crate::numerics::fit::{geometric_samples, loglog};

/// Residual tolerance on fitted exponents.
pub const EXPONENT_TOLERANCE: f64 = 0.1;

/// Which boundary face a sample path approaches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Approach {
    /// `x -> 0` at fixed `rho`.
    XToZero { rho: f64 },
    /// `rho -> 0` at fixed `x`.
    RhoToZero { x: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub approach: Approach,
    /// Largest value of the varying coordinate.
    pub start: f64,
    pub decades: f64,
    pub per_decade: usize,
}

impl SamplePath {
    pub fn new(approach: Approach) -> Self {
        Self { approach, start: 1e-1, decades: 3.0, per_decade: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentFit {
    pub row: usize,
    pub col: usize,
    /// `None` when the remainder vanishes identically along the path.
    pub exponent: Option<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFit {
    pub path: SamplePath,
    pub components: Vec<ComponentFit>,
}

impl PathFit {
    pub fn component(&self, row: usize, col: usize) -> Option<&ComponentFit> {
        self.components.iter().find(|c| c.row == row && c.col == col)
    }

    /// Smallest fitted exponent, `None` if the remainder vanishes.
    pub fn leading_exponent(&self) -> Option<f64> {
        self.components.iter().filter_map(|c| c.exponent).reduce(f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub chart: ChartId,
    pub paths: Vec<PathFit>,
}

/// Fit the decay exponent of each component of `g_eb(m) - g_eb(Minkowski)`.
pub fn fit_admissibility_orders(m: &MetricSpec, chart: ChartId, paths: &[SamplePath]) -> Result<OrderReport> {
    let n = m.n;
    let mink = MetricSpec::minkowski(n);
    let mut out = Vec::new();
    for path in paths {
        if path.per_decade < 4 {
            return Err(Error::Fit(format!("{} samples per decade; at least 4 required", path.per_decade)));
        }
        let params = geometric_samples(path.start, path.decades, path.per_decade);
        let mut rem = Vec::with_capacity(params.len());
        for &p in &params {
            let (rho, x) = match path.approach {
                Approach::XToZero { rho } => (rho, p),
                Approach::RhoToZero { x } => (p, x),
            };
            let c = ChartPoint::new(chart, rho, x, SpherePoint::north_pole(n - 1));
            let g = covariant_metric_eb(m, &c)?;
            let g0 = covariant_metric_eb(&mink, &c)?;
            rem.push((g - &g0, g0.amax().max(1.0)));
        }
        let mut comps = Vec::new();
        for row in 0..=n {
            for col in row..=n {
                let vals: Vec<f64> = rem.iter().map(|(r, _)| r[(row, col)]).collect();
                let zero = rem.iter().zip(&vals).all(|((_, s), v)| v.abs() <= 1e-13 * s);
                if zero {
                    comps.push(ComponentFit { row, col, exponent: None, residual: 0.0 });
                    continue;
                }
                let fit = loglog(&params, &vals)?;
                if fit.local_slope_spread > EXPONENT_TOLERANCE {
                    return Err(Error::Fit(format!(
                        "component ({row}, {col}): local exponents spread by {:.3}",
                        fit.local_slope_spread
                    )));
                }
                comps.push(ComponentFit { row, col, exponent: Some(fit.slope), residual: fit.local_slope_spread });
            }
        }
        out.push(PathFit { path: path.clone(), components: comps });
    }
    Ok(OrderReport { chart, paths: out })
}
