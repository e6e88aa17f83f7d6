//! Power-law fits along curves and threshold sharpness scans.

use serde::{Deserialize, Serialize};

use super::norm::{weighted_norm, Family, NormReport, NormSpec, Region};
use super::solve::SolutionField;
use crate::error::{Error, Result};
use crate::numerics::fit::{geometric_samples, loglog, LineFit};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayCurve {
    /// `t - r = u_ret`, parameter `r`. Without `u_ret` the node with the
    /// largest far-field value is used.
    OutgoingRay { u_ret: Option<f64> },
    /// `t = t_over_r * r` with `t_over_r < 1`, parameter `r`.
    Interior { t_over_r: f64 },
    /// Fixed `rho_0 = 1/(r - t)` towards null infinity, parameter `x`.
    TowardScri { rho0: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct FitWindow {
    /// Range of the curve parameter, in decades, ending at the far end of
    /// the grid.
    pub decades: f64,
    pub per_decade: usize,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self { decades: 2.0, per_decade: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub curve: DecayCurve,
    /// Exponent `a` in `|u| ~ param^a`.
    pub exponent: f64,
    pub stderr: f64,
    pub local_spread: f64,
    pub param_range: (f64, f64),
    pub samples: usize,
}

/// Log-log fit of sampled values, for externally produced data.
pub fn fit_power_law(params: &[f64], values: &[f64]) -> Result<LineFit> {
    if params.len() < 3 {
        return Err(Error::InsufficientRange(format!("{} samples", params.len())));
    }
    let lo = params.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = params.iter().cloned().fold(0.0, f64::max);
    if !(lo > 0.0) || hi / lo < 10.0 {
        return Err(Error::InsufficientRange(format!("parameter range [{lo}, {hi}] spans less than a decade")));
    }
    loglog(params, values)
}

fn far_field_row(u: &SolutionField) -> f64 {
    let g = &u.grid;
    let last = g.nv() - 1;
    let mut best = (0.0, g.u[0]);
    for i in 0..g.nu() {
        let p = u.psi(i, last).abs();
        if p > best.0 {
            best = (p, g.u[i]);
        }
    }
    best.1
}

pub fn decay_fit(u: &SolutionField, curve: DecayCurve, window: &FitWindow) -> Result<DecayFit> {
    let g = &u.grid;
    let (u_lo, u_hi) = (g.u[0], *g.u.last().unwrap());
    let v_max = *g.v.last().unwrap();
    if !(window.decades > 0.0 && window.per_decade >= 2) {
        return Err(Error::Invalid("fit window needs positive decades and at least two samples per decade".into()));
    }
    let span = 10f64.powf(window.decades);
    // (parameter, t, r) samples
    let pts: Vec<(f64, f64, f64)> = match curve {
        DecayCurve::OutgoingRay { u_ret } => {
            let ur = u_ret.unwrap_or_else(|| far_field_row(u));
            if !(ur >= u_lo && ur <= u_hi) {
                return Err(Error::Domain(format!("ray t - r = {ur} outside the grid")));
            }
            let r_hi = 0.5 * (v_max - ur) * (1.0 - 1e-9);
            let r_lo_avail = (0.5 * (g.v[g.uniform_end()] - ur)).max(1.0);
            if r_hi / span < r_lo_avail {
                return Err(Error::InsufficientRange(format!("ray reaches r = {r_hi:.3e}; need {span} x {r_lo_avail:.3}")));
            }
            geometric_samples(r_hi, window.decades, window.per_decade).into_iter().map(|r| (r, ur + r, r)).collect()
        }
        DecayCurve::TowardScri { rho0 } => {
            if !(rho0 > 0.0) {
                return Err(Error::Domain(format!("rho0 = {rho0} must be positive")));
            }
            let ur = -1.0 / rho0;
            if !(ur >= u_lo && ur <= u_hi) {
                return Err(Error::Domain(format!("cone rho0 = {rho0} outside the grid")));
            }
            let r_far = 0.5 * (v_max - ur) * (1.0 - 1e-9);
            let x_lo = (-ur / r_far).sqrt();
            let x_hi = x_lo * span;
            let x_cap = (-ur / (0.5 * (g.v[g.uniform_end()] - ur)).max(1.0)).sqrt().min(1.0);
            if x_hi > x_cap {
                return Err(Error::InsufficientRange(format!("x reaches {x_lo:.3e}; need {span} x that below {x_cap:.3}")));
            }
            geometric_samples(x_hi, window.decades, window.per_decade)
                .into_iter()
                .map(|x| {
                    let r = -ur / (x * x);
                    (x, ur + r, r)
                })
                .collect()
        }
        DecayCurve::Interior { t_over_r } => {
            if !(t_over_r < 1.0 && t_over_r > -1.0) {
                return Err(Error::Domain(format!("t/r = {t_over_r} must lie in (-1, 1)")));
            }
            let mut r_hi = v_max / (1.0 + t_over_r);
            if u_lo < 0.0 {
                r_hi = r_hi.min(-u_lo / (1.0 - t_over_r));
            } else {
                return Err(Error::InsufficientRange("grid starts inside the forward cone".into()));
            }
            r_hi *= 1.0 - 1e-9;
            if r_hi / span < 1.0 {
                return Err(Error::InsufficientRange(format!("curve reaches only r = {r_hi:.3}")));
            }
            geometric_samples(r_hi, window.decades, window.per_decade).into_iter().map(|r| (r, t_over_r * r, r)).collect()
        }
    };
    let mut params = Vec::with_capacity(pts.len());
    let mut values = Vec::with_capacity(pts.len());
    for (p, t, r) in pts {
        let val = u.value_at(t, r)?;
        if val == 0.0 {
            return Err(Error::InsufficientRange(format!("solution vanishes at (t, r) = ({t:.3}, {r:.3})")));
        }
        params.push(p);
        values.push(val);
    }
    let lo = params.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = params.iter().cloned().fold(0.0, f64::max);
    let fit = loglog(&params, &values)?;
    Ok(DecayFit {
        curve,
        exponent: fit.slope,
        stderr: fit.slope_stderr,
        local_spread: fit.local_slope_spread,
        param_range: (lo, hi),
        samples: fit.samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessEntry {
    pub alpha_i: f64,
    pub report: NormReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub alpha0: f64,
    pub entries: Vec<SharpnessEntry>,
    /// Largest finite `alpha_I` and the next divergent one, when the grid
    /// shows a single transition.
    pub bracket: Option<(f64, f64)>,
}

/// `alpha_I` from -0.9 to -0.1 in steps of 0.05.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..=16).map(|k| -0.9 + 0.05 * k as f64).collect()
}

/// `s = 0` exterior norms over a grid of `alpha_I` at fixed `alpha_0`.
pub fn sharpness_scan(u: &SolutionField, alpha_grid: &[f64], alpha0: f64, levels: usize) -> Result<SharpnessReport> {
    let mut grid: Vec<f64> = alpha_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut entries = Vec::with_capacity(grid.len());
    for &a in &grid {
        let spec = NormSpec { s: 0, alpha0, alpha_i: a, alpha_plus: 0.0, family: Family::EdgeB, k: 0, levels };
        entries.push(SharpnessEntry { alpha_i: a, report: weighted_norm(u, &spec, Region::Exterior)? });
    }
    let flags: Vec<bool> = entries.iter().map(|e| e.report.divergent).collect();
    let bracket = flags.iter().position(|&d| d).and_then(|k| {
        let monotone = flags[k..].iter().all(|&d| d) && flags[..k].iter().all(|&d| !d);
        (k > 0 && monotone).then(|| (grid[k - 1], grid[k]))
    });
    Ok(SharpnessReport { alpha0, entries, bracket })
}
