//! Weighted edge-b and b norms of discrete solutions.

use serde::{Deserialize, Serialize};

use super::forcing::sphere_eigenvalue;
use super::solve::SolutionField;
use crate::error::{Error, Result};

/// Ratio of consecutive partial integrals above which an exhaustion step
/// counts as growing.
pub const GROWTH_RATIO: f64 = 1.05;
/// Largest total number of vector fields applied.
pub const MAX_DERIVATIVES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `t d_t + r d_r`, `r (d_t + d_r)`, `x Omega`.
    EdgeB,
    /// `<t - r> (d_t - d_r)`, `r (d_t + d_r)`, `Omega`.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `0 <= t <= r - 1`, weights in `rho_0 = 1/(r - t)` and `x`.
    Exterior,
    /// `t >= 0`; `<t - r>^{-1}` replaces `rho_0` and `rho_+`, and `x` is
    /// capped at 1.
    ForwardCone,
    /// `t - r >= 1` and `x = ((t - r)/r)^{1/2} <= 1`, weights in
    /// `rho_+ = 1/(t - r)` and `x`.
    NearIplus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorField {
    /// `t d_t + r d_r`.
    Scaling,
    /// `r (d_t + d_r)`.
    Outgoing,
    /// `<t - r> (d_t - d_r)`.
    Incoming,
    /// `x Omega`, acting on the mode as multiplication by `x sqrt(ell (ell + n - 2))`.
    EdgeSphere,
    /// `Omega`, acting as multiplication by `sqrt(ell (ell + n - 2))`.
    Rotation,
}

impl Family {
    pub fn fields(self) -> [VectorField; 3] {
        match self {
            Family::EdgeB => [VectorField::Scaling, VectorField::Outgoing, VectorField::EdgeSphere],
            Family::B => [VectorField::Incoming, VectorField::Outgoing, VectorField::Rotation],
        }
    }
}

/// `H^{s,(alpha_0, 2 alpha_I, alpha_+)}` with `k` further b-derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormSpec {
    pub s: usize,
    pub alpha0: f64,
    pub alpha_i: f64,
    pub alpha_plus: f64,
    pub family: Family,
    pub k: usize,
    /// Exhaustion by `x >= 2^{-j}`, `j = 1..=levels`.
    pub levels: usize,
}

impl Default for NormSpec {
    fn default() -> Self {
        Self { s: 0, alpha0: -1.0, alpha_i: -0.6, alpha_plus: 0.0, family: Family::EdgeB, k: 0, levels: 14 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// Square root of the last partial integral.
    pub value: f64,
    /// Squared norm over `x >= 2^{-j}` for `j = 1..=levels`.
    pub partials: Vec<f64>,
    /// Partial integrals keep growing by more than `GROWTH_RATIO` over the
    /// last three steps.
    pub divergent: bool,
    /// The region extends beyond the computed grid in `u`.
    pub truncated: bool,
}

impl NormReport {
    pub fn is_finite(&self) -> bool {
        !self.divergent
    }
}

/// `min(1, (max(|t - r|, 1) / r)^{1/2})`; equals `x` where `|t - r| >= 1`
/// and `x <= 1`.
pub fn x_hat(t: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    ((t - r).abs().max(1.0) / r).sqrt().min(1.0)
}

impl Region {
    pub fn contains(self, t: f64, r: f64) -> bool {
        match self {
            Region::Exterior => t >= 0.0 && t <= r - 1.0,
            Region::ForwardCone => t >= 0.0,
            Region::NearIplus => t - r >= 1.0 && r >= t - r,
        }
    }

    /// Weight `w` with `||u|| = ||w u||_{L^2}`.
    pub fn weight(self, spec: &NormSpec, t: f64, r: f64) -> f64 {
        match self {
            Region::Exterior => {
                let d = r - t;
                d.powf(spec.alpha0) * (d / r).powf(-spec.alpha_i)
            }
            Region::NearIplus => {
                let d = t - r;
                d.powf(spec.alpha_plus) * (d / r).powf(-spec.alpha_i)
            }
            Region::ForwardCone => {
                let d = (1.0 + (t - r) * (t - r)).sqrt();
                let a = if t < r { spec.alpha0 } else { spec.alpha_plus };
                d.powf(a) * x_hat(t, r).powf(-2.0 * spec.alpha_i)
            }
        }
    }
}

fn node_values(u: &SolutionField, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let g = &u.grid;
    let mut out = Vec::with_capacity(u.node_count());
    for i in 0..g.nu() {
        for j in i..g.nv() {
            let (t, r) = g.t_r(i, j);
            out.push(f(t, r));
        }
    }
    out
}

fn d_dv(v: &[f64], vals: &[f64], j: usize, lo: usize) -> f64 {
    let last = v.len() - 1;
    if last - lo < 2 {
        return if j < last { (vals[j + 1] - vals[j]) / (v[j + 1] - v[j]) } else { (vals[j] - vals[j - 1]) / (v[j] - v[j - 1]) };
    }
    if j > lo && j < last {
        let (h1, h2) = (v[j] - v[j - 1], v[j + 1] - v[j]);
        -h2 / (h1 * (h1 + h2)) * vals[j - 1] + (h2 - h1) / (h1 * h2) * vals[j] + h1 / (h2 * (h1 + h2)) * vals[j + 1]
    } else if j == lo {
        let (h1, h2) = (v[j + 1] - v[j], v[j + 2] - v[j + 1]);
        -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * vals[j] + (h1 + h2) / (h1 * h2) * vals[j + 1] - h1 / (h2 * (h1 + h2)) * vals[j + 2]
    } else {
        let (h1, h2) = (v[j] - v[j - 1], v[j - 1] - v[j - 2]);
        (2.0 * h1 + h2) / (h1 * (h1 + h2)) * vals[j] - (h1 + h2) / (h1 * h2) * vals[j - 1] + h1 / (h2 * (h1 + h2)) * vals[j - 2]
    }
}

/// Apply one vector field to node values stored like `SolutionField`.
pub fn apply_field(u: &SolutionField, vals: &[f64], field: VectorField) -> Vec<f64> {
    let g = &u.grid;
    let off = u.offsets();
    let (nu, nv) = (g.nu(), g.nv());
    let du = g.du();
    let at = |i: usize, j: usize| vals[off[i] + (j - i)];
    let lam = sphere_eigenvalue(u.n, u.ell).sqrt();
    let mut out = vec![0.0; vals.len()];
    let mut row_buf = vec![0.0; nv];
    for i in 0..nu {
        let row = &vals[off[i]..off[i + 1]];
        for (j, val) in row.iter().enumerate() {
            row_buf[i + j] = *val;
        }
        for j in i..nv {
            let (t, r) = g.t_r(i, j);
            let dvv = || d_dv(&g.v, &row_buf, j, i);
            let duu = || {
                if i > 0 && i + 1 < nu && j > i {
                    (at(i + 1, j) - at(i - 1, j)) / (2.0 * du)
                } else if i + 2 < nu && j >= i + 2 {
                    (-3.0 * at(i, j) + 4.0 * at(i + 1, j) - at(i + 2, j)) / (2.0 * du)
                } else if i >= 2 {
                    (3.0 * at(i, j) - 4.0 * at(i - 1, j) + at(i - 2, j)) / (2.0 * du)
                } else if i >= 1 {
                    (at(i, j) - at(i - 1, j)) / du
                } else {
                    0.0
                }
            };
            let w = at(i, j);
            out[off[i] + (j - i)] = match field {
                VectorField::Scaling => g.u[i] * duu() + g.v[j] * dvv(),
                VectorField::Outgoing => 2.0 * r * dvv(),
                VectorField::Incoming => 2.0 * (1.0 + g.u[i] * g.u[i]).sqrt() * duu(),
                VectorField::EdgeSphere => lam * x_hat(t, r) * w,
                VectorField::Rotation => lam * w,
            };
        }
    }
    out
}

struct Quadrature<'a> {
    u: &'a SolutionField,
    region: Region,
    levels: usize,
    /// Level of each full cell, `usize::MAX` outside the region.
    cell_level: Vec<usize>,
    node_weight_sq: Vec<f64>,
}

impl<'a> Quadrature<'a> {
    fn new(u: &'a SolutionField, spec: &NormSpec, region: Region) -> Self {
        let g = &u.grid;
        let mut cell_level = Vec::new();
        for i in 0..g.nu() - 1 {
            for j in (i + 1)..(g.nv() - 1) {
                let t = 0.25 * (g.u[i] + g.u[i + 1] + g.v[j] + g.v[j + 1]);
                let r = 0.25 * (g.v[j] + g.v[j + 1] - g.u[i] - g.u[i + 1]);
                let lvl = if region.contains(t, r) {
                    let x = x_hat(t, r);
                    let l = (-x.log2()).ceil().max(1.0);
                    if l <= spec.levels as f64 {
                        l as usize
                    } else {
                        usize::MAX
                    }
                } else {
                    usize::MAX
                };
                cell_level.push(lvl);
            }
        }
        let nf = u.n as f64 - 1.0;
        let node_weight_sq = node_values(u, |t, r| {
            let w = region.weight(spec, t, r);
            let v = w * w * r.powf(nf);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        });
        Self { u, region, levels: spec.levels, cell_level, node_weight_sq }
    }

    /// Squared norm per exhaustion level (cumulative).
    fn partials(&self, vals: &[f64]) -> Vec<f64> {
        let g = &self.u.grid;
        let off = self.u.offsets();
        let mut bins = vec![0.0; self.levels + 1];
        let node = |i: usize, j: usize| {
            let k = off[i] + (j - i);
            self.node_weight_sq[k] * vals[k] * vals[k]
        };
        let mut c = 0;
        for i in 0..g.nu() - 1 {
            let du = g.u[i + 1] - g.u[i];
            for j in (i + 1)..(g.nv() - 1) {
                let lvl = self.cell_level[c];
                c += 1;
                if lvl == usize::MAX {
                    continue;
                }
                let area = 0.5 * du * (g.v[j + 1] - g.v[j]);
                bins[lvl] += area * 0.25 * (node(i, j) + node(i + 1, j) + node(i, j + 1) + node(i + 1, j + 1));
            }
        }
        let mut acc = 0.0;
        bins[1..]
            .iter()
            .map(|b| {
                acc += b;
                acc
            })
            .collect()
    }

    fn truncated(&self) -> bool {
        let u_max = *self.u.grid.u.last().unwrap();
        match self.region {
            Region::Exterior => u_max < -1.0,
            Region::ForwardCone | Region::NearIplus => true,
        }
    }
}

fn check_coverage(u: &SolutionField, spec: &NormSpec, region: Region) -> Result<()> {
    let g = &u.grid;
    let v_max = *g.v.last().unwrap();
    let (u_lo, u_hi) = (g.u[0], *g.u.last().unwrap());
    let scale = 2.0 * 4f64.powi(spec.levels as i32);
    let need = match region {
        Region::Exterior => u_lo.abs() * (scale - 1.0),
        Region::NearIplus => u_hi.max(1.0) * (scale + 1.0),
        Region::ForwardCone => u_lo.abs().max(u_hi).max(1.0) * (scale + 1.0),
    };
    if v_max < need {
        return Err(Error::GridTooCoarse(format!(
            "{} exhaustion levels need v up to {need:.3e}, grid ends at {v_max:.3e}",
            spec.levels
        )));
    }
    Ok(())
}

/// Growing over each of the last three exhaustion steps.
pub fn divergent_trend(partials: &[f64]) -> bool {
    if partials.len() < 4 {
        return false;
    }
    partials.windows(2).rev().take(3).all(|w| w[1] > 0.0 && (w[0] == 0.0 || w[1] / w[0] > GROWTH_RATIO))
}

/// Weighted norm over `region`, summed over all words of at most `s` fields
/// of `spec.family` followed by at most `k` b-fields.
pub fn weighted_norm(u: &SolutionField, spec: &NormSpec, region: Region) -> Result<NormReport> {
    if spec.s + spec.k > MAX_DERIVATIVES {
        return Err(Error::GridTooCoarse(format!("s + k = {} exceeds {MAX_DERIVATIVES}", spec.s + spec.k)));
    }
    if spec.levels < 4 {
        return Err(Error::Invalid("at least four exhaustion levels are needed".into()));
    }
    check_coverage(u, spec, region)?;
    let q = Quadrature::new(u, spec, region);
    let base = u.amplitude_values();
    let mut total = vec![0.0; spec.levels];
    // depth-first over words: edge/b family first, then b-fields
    let mut stack: Vec<(Vec<f64>, usize, usize, bool)> = vec![(base, 0, 0, false)];
    let fam = spec.family.fields();
    let bf = Family::B.fields();
    while let Some((vals, ns, nk, in_b)) = stack.pop() {
        for (t, p) in total.iter_mut().zip(q.partials(&vals)) {
            *t += p;
        }
        if !in_b && ns < spec.s {
            for f in fam {
                stack.push((apply_field(u, &vals, f), ns + 1, nk, false));
            }
        }
        if nk < spec.k {
            for f in bf {
                stack.push((apply_field(u, &vals, f), ns, nk + 1, true));
            }
        }
    }
    let divergent = divergent_trend(&total);
    Ok(NormReport { value: total.last().copied().unwrap_or(0.0).sqrt(), partials: total, divergent, truncated: q.truncated() })
}
