//! Forward solutions of the spherical-mode wave equation on a null grid.
//!
//! With `u_ell = r^{-(n-1)/2} psi`, the mode equation becomes
//! `4 psi_uv + V psi + (2 p1 / r)(psi_u + psi_v) = r^{(n-1)/2} f`, which is
//! integrated over each grid diamond.

use serde::{Deserialize, Serialize};

use super::forcing::{check_dimension, mode_potential, ForcingSpec, WaveOperator};
use super::grid::{GridSpec, NullGrid};
use crate::error::{Error, Result};
use crate::numerics::quad::gauss_legendre;

/// Discrete forward solution for one spherical mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub n: usize,
    pub ell: usize,
    pub operator: WaveOperator,
    pub forcing: Vec<ForcingSpec>,
    pub grid: NullGrid,
    /// `psi(i, j)` for `j >= i`, row by row.
    psi: Vec<f64>,
    offsets: Vec<usize>,
}

fn row_offsets(nu: usize, nv: usize) -> Vec<usize> {
    let mut off = Vec::with_capacity(nu + 1);
    let mut acc = 0;
    for i in 0..nu {
        off.push(acc);
        acc += nv - i;
    }
    off.push(acc);
    off
}

/// Cell integral of `r^{(n-1)/2} f` over `[u0, u1] x [v0, v1]`.
fn cell_forcing(n: usize, forcing: &[ForcingSpec], rule: &(Vec<f64>, Vec<f64>), u: (f64, f64), v: (f64, f64)) -> f64 {
    let (tlo, thi) = (0.5 * (u.0 + v.0), 0.5 * (u.1 + v.1));
    let (rlo, rhi) = (0.5 * (v.0 - u.1), 0.5 * (v.1 - u.0));
    let active: Vec<&ForcingSpec> = forcing
        .iter()
        .filter(|f| f.t_range[0] < thi && f.t_range[1] > tlo && f.r_range[0] < rhi && f.r_range[1] > rlo)
        .collect();
    if active.is_empty() {
        return 0.0;
    }
    let (hu, hv) = (0.5 * (u.1 - u.0), 0.5 * (v.1 - v.0));
    let (mu, mv) = (0.5 * (u.0 + u.1), 0.5 * (v.0 + v.1));
    let half = 0.5 * (n as f64 - 1.0);
    let mut s = 0.0;
    for (a, wa) in rule.0.iter().zip(&rule.1) {
        let uu = mu + hu * a;
        for (b, wb) in rule.0.iter().zip(&rule.1) {
            let vv = mv + hv * b;
            let (t, r) = (0.5 * (uu + vv), 0.5 * (vv - uu));
            if r <= 0.0 {
                continue;
            }
            let f: f64 = active.iter().map(|f| f.value(t, r)).sum();
            s += wa * wb * r.powf(half) * f;
        }
    }
    s * hu * hv
}

/// Coefficients `(c_n, c_e, c_w, c_s)` of the diamond update
/// `c_n psi_N = F + c_e psi_E + c_w psi_W - c_s psi_S`.
fn diamond_coefficients(n: usize, ell: usize, p1: f64, du: f64, dv: f64, rc: f64) -> [f64; 4] {
    let q = du * dv * mode_potential(n, ell, rc) / 4.0;
    let a = p1 * dv / rc;
    let b = p1 * du / rc;
    [4.0 + q + a + b, 4.0 - q + a - b, 4.0 - q - a + b, 4.0 + q - a - b]
}

fn check_forcing(n: usize, forcing: &[ForcingSpec]) -> Result<usize> {
    check_dimension(n)?;
    let first = forcing.first().ok_or_else(|| Error::Invalid("no forcing terms".into()))?;
    for f in forcing {
        f.validate()?;
        if f.ell != first.ell {
            return Err(Error::UnsupportedMode("forcing terms must share one spherical mode".into()));
        }
    }
    Ok(first.ell)
}

/// Default first outgoing cone: one cell before the support.
pub fn default_u_min(forcing: &[ForcingSpec], du: f64) -> f64 {
    let lo = forcing.iter().map(|f| f.retarded_range().0).fold(f64::INFINITY, f64::min);
    lo - du
}

/// Forward solution of `P u = f` for a single spherical mode.
pub fn solve_spherical_forward(n: usize, operator: WaveOperator, forcing: &[ForcingSpec], spec: &GridSpec) -> Result<SolutionField> {
    let ell = check_forcing(n, forcing)?;
    if !operator.p1().is_finite() {
        return Err(Error::Invalid("p1 must be finite".into()));
    }
    let width = forcing
        .iter()
        .map(|f| (f.t_range[1] - f.t_range[0]).min(f.r_range[1] - f.r_range[0]))
        .fold(f64::INFINITY, f64::min);
    if spec.du > 0.25 * width {
        return Err(Error::CflViolation(format!("du = {} does not resolve a forcing of width {width}", spec.du)));
    }
    if spec.quad_points == 0 || spec.quad_points > 32 {
        return Err(Error::Invalid(format!("quad_points = {} outside 1..=32", spec.quad_points)));
    }
    let u_min = spec.u_min.unwrap_or_else(|| default_u_min(forcing, spec.du));
    if forcing.iter().any(|f| f.retarded_range().0 < u_min) {
        return Err(Error::Invalid(format!("u_min = {u_min} cuts the forcing support")));
    }
    let grid = spec.build(u_min)?;
    let (nu, nv) = (grid.nu(), grid.nv());
    let offsets = row_offsets(nu, nv);
    let mut psi = vec![0.0; offsets[nu]];
    let rule = gauss_legendre(spec.quad_points);
    let p1 = operator.p1();
    for i in 0..nu - 1 {
        let (s_row, n_row) = (offsets[i], offsets[i + 1]);
        let (u0, u1) = (grid.u[i], grid.u[i + 1]);
        let du = u1 - u0;
        // psi(i + 1, i + 1) = 0 on the axis
        for j in (i + 1)..(nv - 1) {
            let (v0, v1) = (grid.v[j], grid.v[j + 1]);
            let dv = v1 - v0;
            let rc = 0.25 * (v0 + v1 - u0 - u1);
            let ps = psi[s_row + (j - i)];
            let pe = psi[s_row + (j + 1 - i)];
            let pw = psi[n_row + (j - i - 1)];
            let f = cell_forcing(n, forcing, &rule, (u0, u1), (v0, v1));
            let [cn, ce, cw, cs] = diamond_coefficients(n, ell, p1, du, dv, rc);
            psi[n_row + (j - i)] = (f + ce * pe + cw * pw - cs * ps) / cn;
        }
    }
    Ok(SolutionField { n, ell, operator, forcing: forcing.to_vec(), grid, psi, offsets })
}

impl SolutionField {
    /// Field with node values `psi(i, j)` from a callback.
    pub(crate) fn from_nodes<F: Fn(f64, f64) -> Result<f64> + Sync>(
        n: usize,
        operator: WaveOperator,
        forcing: &[ForcingSpec],
        grid: NullGrid,
        psi_of: F,
    ) -> Result<Self> {
        use rayon::prelude::*;
        let ell = check_forcing(n, forcing)?;
        let (nu, nv) = (grid.nu(), grid.nv());
        let offsets = row_offsets(nu, nv);
        let rows: Vec<Vec<f64>> = (0..nu)
            .into_par_iter()
            .map(|i| (i..nv).map(|j| if j == i { Ok(0.0) } else { let (t, r) = grid.t_r(i, j); psi_of(t, r) }).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let psi = rows.concat();
        Ok(SolutionField { n, ell, operator, forcing: forcing.to_vec(), grid, psi, offsets })
    }

    /// `r^{(n-1)/2} u_ell` at node `(i, j)`; zero for `j < i`.
    pub fn psi(&self, i: usize, j: usize) -> f64 {
        if j < i {
            return 0.0;
        }
        self.psi[self.offsets[i] + (j - i)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.psi[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Mode amplitude `u_ell` at a node. On the axis the value at the
    /// neighbouring node is used.
    pub fn amplitude(&self, i: usize, j: usize) -> f64 {
        let j = if j == i { (i + 1).min(self.grid.nv() - 1) } else { j };
        let (_, r) = self.grid.t_r(i, j);
        if r <= 0.0 {
            return 0.0;
        }
        self.psi(i, j) * r.powf(-0.5 * (self.n as f64 - 1.0))
    }

    /// Amplitudes of all nodes in storage order.
    pub fn amplitude_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.psi.len());
        for i in 0..self.grid.nu() {
            for j in i..self.grid.nv() {
                out.push(self.amplitude(i, j));
            }
        }
        out
    }

    /// Field multiplied pointwise by `g(t, r)`.
    pub fn multiplied<G: Fn(f64, f64) -> f64>(&self, g: G) -> SolutionField {
        let mut out = self.clone();
        for i in 0..self.grid.nu() {
            for j in i..self.grid.nv() {
                let (t, r) = self.grid.t_r(i, j);
                out.psi[self.offsets[i] + (j - i)] *= g(t, r);
            }
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.psi.len()
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn max_abs_psi(&self) -> f64 {
        self.psi.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn node_or_reflection(&self, i: usize, j: usize) -> f64 {
        if j >= i {
            self.psi(i, j)
        } else if i < self.grid.nv() && j < self.grid.nu() {
            -self.psi(j, i)
        } else {
            0.0
        }
    }

    /// Bilinear interpolation of `psi` in `(u, v)`.
    pub fn psi_at(&self, t: f64, r: f64) -> Result<f64> {
        let (u, v) = (t - r, t + r);
        if u < self.grid.u[0] && v >= self.grid.u[0] {
            return Ok(0.0);
        }
        let i = NullGrid::bracket(&self.grid.u, u).ok_or_else(|| Error::Domain(format!("u = {u} outside the grid")))?;
        let j = NullGrid::bracket(&self.grid.v, v).ok_or_else(|| Error::Domain(format!("v = {v} outside the grid")))?;
        let a = (u - self.grid.u[i]) / (self.grid.u[i + 1] - self.grid.u[i]);
        let b = (v - self.grid.v[j]) / (self.grid.v[j + 1] - self.grid.v[j]);
        let p = |ii, jj| self.node_or_reflection(ii, jj);
        Ok((1.0 - a) * (1.0 - b) * p(i, j) + a * (1.0 - b) * p(i + 1, j) + (1.0 - a) * b * p(i, j + 1) + a * b * p(i + 1, j + 1))
    }

    /// Interpolated mode amplitude.
    pub fn value_at(&self, t: f64, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(Error::Domain(format!("r = {r} must be positive")));
        }
        Ok(self.psi_at(t, r)? * r.powf(-0.5 * (self.n as f64 - 1.0)))
    }

    /// Largest cell residual of the diamond equations relative to the
    /// largest cell forcing.
    pub fn residual(&self, quad_points: usize) -> f64 {
        let rule = gauss_legendre(quad_points);
        let g = &self.grid;
        let p1 = self.operator.p1();
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for i in 0..g.nu() - 1 {
            let (u0, u1) = (g.u[i], g.u[i + 1]);
            for j in (i + 1)..(g.nv() - 1) {
                let (v0, v1) = (g.v[j], g.v[j + 1]);
                let rc = 0.25 * (v0 + v1 - u0 - u1);
                let f = cell_forcing(self.n, &self.forcing, &rule, (u0, u1), (v0, v1));
                let [cn, ce, cw, cs] = diamond_coefficients(self.n, self.ell, p1, u1 - u0, v1 - v0, rc);
                let r = cn * self.psi(i + 1, j + 1) - ce * self.psi(i, j + 1) - cw * self.psi(i + 1, j) + cs * self.psi(i, j) - f;
                worst = worst.max(r.abs());
                scale = scale.max(f.abs());
            }
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    /// Energy `1/2 int (psi_t^2 + psi_r^2 + V psi^2) dr` on the slice through
    /// the axis node nearest to time `t`, as a sum over a null staircase.
    /// The slice must lie in the uniform part of the grid.
    pub fn slice_energy(&self, t: f64) -> Result<f64> {
        let g = &self.grid;
        let du = g.du();
        let k = ((t - g.u[0]) / du).round();
        if k < 1.0 {
            return Err(Error::Domain(format!("t = {t} precedes the grid")));
        }
        let k = k as usize;
        let m = 2 * k;
        if k >= g.nu() || m > g.uniform_end() {
            return Err(Error::GridTooCoarse(format!("slice t = {t} leaves the uniform part of the grid")));
        }
        let mut e = 0.0;
        for a in 1..=k {
            let (i, j) = (a, m - a);
            let corner = self.psi(i - 1, j);
            let du_diff = self.psi(i, j) - corner;
            let dv_diff = self.psi(i - 1, j + 1) - corner;
            e += (du_diff * du_diff + dv_diff * dv_diff) / du;
        }
        for a in 0..k {
            let (i, j) = (a, m - a);
            let (_, r) = g.t_r(i, j);
            let p = self.psi(i, j);
            e += 0.5 * mode_potential(self.n, self.ell, r) * p * p * du;
        }
        Ok(e)
    }
}
