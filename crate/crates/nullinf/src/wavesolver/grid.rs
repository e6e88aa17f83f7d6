//! Double-null grids in `u = t - r`, `v = t + r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ratio `dv / r` tolerated in the stretched part of the grid.
pub const MAX_STRETCH_RATIO: f64 = 0.5;

/// Uniform spacing `du` in `u` and in `v` up to `v_uniform`, then
/// `dv = du * (1 + (v - v_uniform) / stretch)` up to `v_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct GridSpec {
    pub du: f64,
    /// First outgoing cone; chosen from the forcing when absent.
    pub u_min: Option<f64>,
    pub u_max: f64,
    pub v_uniform: f64,
    pub v_max: f64,
    pub stretch: f64,
    /// Gauss points per direction for cell integrals of the forcing.
    pub quad_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { du: 0.05, u_min: None, u_max: -1.0, v_uniform: 20.0, v_max: 1e4, stretch: 20.0, quad_points: 6 }
    }
}

/// Node coordinates. `v[k] == u[k]` for every `u` node, so node `(i, i)`
/// lies on the axis `r = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullGrid {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl GridSpec {
    pub fn refined(&self) -> Self {
        Self { du: 0.5 * self.du, ..*self }
    }

    pub fn build(&self, u_min: f64) -> Result<NullGrid> {
        let du = self.du;
        if !(du > 0.0 && du.is_finite()) {
            return Err(Error::CflViolation(format!("du = {du} must be positive")));
        }
        if !(self.stretch > 0.0) || 2.0 * du / self.stretch > MAX_STRETCH_RATIO {
            return Err(Error::CflViolation(format!(
                "stretch scale {} too small for du = {du}: dv / r would exceed {MAX_STRETCH_RATIO}",
                self.stretch
            )));
        }
        if !(self.u_max > u_min && self.v_uniform >= self.u_max && self.v_max >= self.v_uniform) {
            return Err(Error::Invalid(format!(
                "need u_min < u_max <= v_uniform <= v_max, got {u_min}, {}, {}, {}",
                self.u_max, self.v_uniform, self.v_max
            )));
        }
        let nu = ((self.u_max - u_min) / du - 1e-9).ceil() as usize;
        let u: Vec<f64> = (0..=nu).map(|i| u_min + i as f64 * du).collect();
        let nuni = ((self.v_uniform - u_min) / du - 1e-9).ceil().max(nu as f64) as usize;
        let mut v: Vec<f64> = (0..=nuni).map(|j| u_min + j as f64 * du).collect();
        let v_s = v[nuni];
        while *v.last().unwrap() < self.v_max {
            let last = *v.last().unwrap();
            v.push(last + du * (1.0 + (last - v_s) / self.stretch));
            if v.len() > 50_000_000 {
                return Err(Error::Invalid("grid too large".into()));
            }
        }
        Ok(NullGrid { u, v })
    }
}

impl NullGrid {
    pub fn du(&self) -> f64 {
        self.u[1] - self.u[0]
    }

    pub fn nu(&self) -> usize {
        self.u.len()
    }

    pub fn nv(&self) -> usize {
        self.v.len()
    }

    /// Index of the last node of the uniform part in `v`.
    pub fn uniform_end(&self) -> usize {
        let du = self.du();
        self.v.windows(2).position(|w| w[1] - w[0] > du * (1.0 + 1e-9)).unwrap_or(self.v.len() - 1)
    }

    pub fn t_r(&self, i: usize, j: usize) -> (f64, f64) {
        let (u, v) = (self.u[i], self.v[j]);
        (0.5 * (u + v), 0.5 * (v - u))
    }

    /// Cell index `k` with `x[k] <= q < x[k + 1]`.
    pub(crate) fn bracket(xs: &[f64], q: f64) -> Option<usize> {
        if !(q >= xs[0] && q <= *xs.last().unwrap()) {
            return None;
        }
        let k = xs.partition_point(|&x| x <= q);
        Some(k.saturating_sub(1).min(xs.len() - 2))
    }
}
