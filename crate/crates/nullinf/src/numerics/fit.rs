//! Weighted straight-line fits in log-log coordinates.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Result of a straight-line fit `y = intercept + slope * x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
    /// Largest deviation between the fitted slope and a slope between
    /// neighbouring samples.
    pub local_slope_spread: f64,
    pub samples: usize,
}

/// Weighted least-squares line through `(xs[k], ys[k])`.
pub fn weighted_line(xs: &[f64], ys: &[f64], ws: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n || ws.len() != n {
        return Err(Error::Fit(format!("need at least two samples, got {n}")));
    }
    let sw: f64 = ws.iter().sum();
    let mx = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let my = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for k in 0..n {
        let dx = xs[k] - mx;
        sxx += ws[k] * dx * dx;
        sxy += ws[k] * dx * (ys[k] - my);
    }
    if sxx <= 0.0 {
        return Err(Error::Fit("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ssr = 0.0;
    for k in 0..n {
        let e = ys[k] - intercept - slope * xs[k];
        ssr += ws[k] * e * e;
    }
    let dof = (n as f64 - 2.0).max(1.0);
    let slope_stderr = (ssr / dof / sxx).sqrt();
    let mut spread: f64 = 0.0;
    for k in 1..n {
        let dx = xs[k] - xs[k - 1];
        if dx != 0.0 {
            spread = spread.max(((ys[k] - ys[k - 1]) / dx - slope).abs());
        }
    }
    Ok(LineFit { slope, intercept, slope_stderr, local_slope_spread: spread, samples: n })
}

/// Unit-weight fit of `log|v|` against `log p`.
pub fn loglog(params: &[f64], values: &[f64]) -> Result<LineFit> {
    let mut xs = Vec::with_capacity(params.len());
    let mut ys = Vec::with_capacity(params.len());
    for (p, v) in params.iter().zip(values) {
        if *p <= 0.0 || *v == 0.0 || !v.is_finite() {
            return Err(Error::Fit(format!("cannot take logarithms of ({p}, {v})")));
        }
        xs.push(p.ln());
        ys.push(v.abs().ln());
    }
    let ws = vec![1.0; xs.len()];
    weighted_line(&xs, &ys, &ws)
}

/// Geometric samples: `per_decade` points per decade from `hi` down over
/// `decades` decades (both ends included).
pub fn geometric_samples(hi: f64, decades: f64, per_decade: usize) -> Vec<f64> {
    let count = (decades * per_decade as f64).round() as usize;
    (0..=count)
        .map(|k| hi * 10f64.powf(-(k as f64) / per_decade as f64))
        .collect()
}
