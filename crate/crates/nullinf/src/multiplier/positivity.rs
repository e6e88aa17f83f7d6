//! Definiteness of the model deformation tensor at null infinity over a grid
//! of multiplier parameters `c`.

use serde::{Deserialize, Serialize};

use super::deformation::deformation_tensor_symbolic;
use super::field::MultiplierField;
use crate::error::{Error, Result};
use crate::geometry::ChartId;

/// Margin above which a tensor counts as definite.
pub const DEFINITE_MARGIN: f64 = 1e-13;

/// Which estimate the multiplier serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Forward problem: positive definiteness with `lambda = p1`.
    Forward,
    /// Adjoint problem: negative definiteness with `lambda = -p1`.
    Adjoint,
}

/// Unshifted weights `(alpha0, alpha_i, alpha_plus)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub alpha0: f64,
    pub alpha_i: f64,
    pub alpha_plus: f64,
}

impl Weights {
    pub fn new(alpha0: f64, alpha_i: f64, alpha_plus: f64) -> Self {
        Self { alpha0, alpha_i, alpha_plus }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightName {
    Alpha0,
    AlphaI,
    AlphaPlus,
}

impl Weights {
    pub fn with(mut self, which: WeightName, v: f64) -> Self {
        match which {
            WeightName::Alpha0 => self.alpha0 = v,
            WeightName::AlphaI => self.alpha_i = v,
            WeightName::AlphaPlus => self.alpha_plus = v,
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub chart: ChartId,
    pub side: Side,
    pub c_values: Vec<f64>,
    /// Smallest eigenvalue (forward) or minus the largest (adjoint) per `c`.
    pub margins: Vec<f64>,
    pub best_c: f64,
    pub best_margin: f64,
    /// Some `c` of the grid gives a definite tensor.
    pub definite: bool,
}

/// `c` values log-spaced on `[1e-8, 1.9]`.
pub fn default_c_grid() -> Vec<f64> {
    log_c_grid(1.9)
}

/// 120 log-spaced `c` values on `[1e-8, c_max]`.
pub fn log_c_grid(c_max: f64) -> Vec<f64> {
    let (lo, hi) = (1e-8f64.log10(), c_max.log10());
    (0..120).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / 119.0)).collect()
}

pub fn positivity_scan(chart: ChartId, n: usize, w: Weights, p1: f64, c_grid: &[f64], side: Side) -> Result<PositivityReport> {
    if c_grid.is_empty() {
        return Err(Error::Invalid("empty c grid".into()));
    }
    let lambda = match side {
        Side::Forward => p1,
        Side::Adjoint => -p1,
    };
    let mut margins = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let f = MultiplierField::from_weights(w.alpha0, w.alpha_i, w.alpha_plus, c, chart)?;
        let k = deformation_tensor_symbolic(n, &f, lambda)?;
        margins.push(match side {
            Side::Forward => k.min_eigenvalue(),
            Side::Adjoint => -k.max_eigenvalue(),
        });
    }
    let (bi, best) = margins
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    Ok(PositivityReport {
        chart,
        side,
        c_values: c_grid.to_vec(),
        margins,
        best_c: c_grid[bi],
        best_margin: best,
        definite: best > DEFINITE_MARGIN,
    })
}

/// Bisection for the edge of the definite region as one weight varies in
/// `[lo, hi]`, scanning `c` up to `c_max`. The predicate must differ at the
/// two ends. Small `c_max` recovers the limiting thresholds.
#[allow(clippy::too_many_arguments)]
pub fn positivity_boundary(
    chart: ChartId,
    n: usize,
    base: Weights,
    which: WeightName,
    (lo, hi): (f64, f64),
    p1: f64,
    side: Side,
    c_max: f64,
    tol: f64,
) -> Result<f64> {
    if !(c_max > 1e-8 && c_max < 2.0) {
        return Err(Error::Invalid(format!("c_max = {c_max} outside (1e-8, 2)")));
    }
    let grid = log_c_grid(c_max);
    let definite = |v: f64| -> Result<bool> { Ok(positivity_scan(chart, n, base.with(which, v), p1, &grid, side)?.definite) };
    let (mut a, mut b) = (lo, hi);
    let fa = definite(a)?;
    if fa == definite(b)? {
        return Err(Error::Invalid(format!("definiteness does not change on [{lo}, {hi}]")));
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if definite(mid)? == fa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
