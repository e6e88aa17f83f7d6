//! Mellin transform in `rho_+` on geometric grids.
//!
//! `M u(lambda) = int_0^inf rho^{-i lambda} u(rho) drho/rho` on the line
//! `Im lambda = -gamma_+`. With `rho = e^t` and `lambda = sigma - i gamma_+`
//! this is the Fourier transform of `e^{-gamma_+ t} u(e^t)`, evaluated by
//! the trapezoid rule in `t` and an FFT.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest relative size of the weighted samples at the ends of the grid.
pub const END_DECAY_TOL: f64 = 1e-10;
/// Largest relative size of the transform in the outer eighth of the band.
pub const BAND_EDGE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Geometric grid `rho_k = exp(t0 + k h)`, `k < len`, with the dual grid
/// `sigma_m = 2 pi m / (len h)`, `-len/2 <= m < len/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinGrid {
    pub t0: f64,
    pub h: f64,
    pub len: usize,
}

impl MellinGrid {
    /// Grid covering `[rho_min, rho_max]` with `len` points.
    pub fn spanning(rho_min: f64, rho_max: f64, len: usize) -> Result<Self> {
        if !(rho_min > 0.0 && rho_max > rho_min && len >= 8 && len.is_multiple_of(2)) {
            return Err(Error::Invalid(format!("bad Mellin grid [{rho_min}, {rho_max}] with {len} points")));
        }
        let (t0, t1) = (rho_min.ln(), rho_max.ln());
        Ok(Self { t0, h: (t1 - t0) / (len - 1) as f64, len })
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    pub fn rho(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.t(k).exp()).collect()
    }

    pub fn d_sigma(&self) -> f64 {
        2.0 * PI / (self.len as f64 * self.h)
    }

    /// `Re lambda` values of the transform samples, increasing.
    pub fn sigma(&self) -> Vec<f64> {
        let half = (self.len / 2) as i64;
        (-half..half).map(|m| m as f64 * self.d_sigma()).collect()
    }

    /// `lambda = sigma - i gamma_+` for every transform sample.
    pub fn lambdas(&self, gamma_plus: f64) -> Vec<Complex64> {
        self.sigma().into_iter().map(|s| Complex64::new(s, -gamma_plus)).collect()
    }
}

/// Samples of a function and of its transform on the line
/// `Im lambda = -gamma_+`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinPair {
    pub grid: MellinGrid,
    pub gamma_plus: f64,
    pub samples: Vec<Complex64>,
    pub transform: Vec<Complex64>,
}

impl MellinPair {
    pub fn from_samples(grid: MellinGrid, gamma_plus: f64, samples: Vec<Complex64>) -> Result<Self> {
        let transform = mellin_transform(&samples, &grid, Direction::Forward, gamma_plus)?;
        Ok(Self { grid, gamma_plus, samples, transform })
    }

    /// `||rho^{-gamma_+} u||` in `L^2(drho/rho)`.
    pub fn sample_norm(&self) -> f64 {
        weighted_norm(&self.grid, &self.samples, self.gamma_plus)
    }

    /// `(2 pi)^{-1/2} ||M u||` in `L^2(d sigma)`.
    pub fn transform_norm(&self) -> f64 {
        line_norm(&self.grid, &self.transform)
    }
}

fn fft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    plan.process(data);
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Forward: samples `u(rho_k)` to `M u(sigma_m - i gamma_+)`. Inverse: the
/// reverse map.
pub fn mellin_transform(values: &[Complex64], grid: &MellinGrid, direction: Direction, gamma_plus: f64) -> Result<Vec<Complex64>> {
    let n = grid.len;
    if values.len() != n {
        return Err(Error::Invalid(format!("{} samples for a grid of {n}", values.len())));
    }
    let half = n / 2;
    let sigma = grid.sigma();
    match direction {
        Direction::Forward => {
            let mut v: Vec<Complex64> = values.iter().enumerate().map(|(k, u)| u * (-gamma_plus * grid.t(k)).exp()).collect();
            let vmax = max_norm(&v);
            if vmax > 0.0 && (v[0].norm() > END_DECAY_TOL * vmax || v[n - 1].norm() > END_DECAY_TOL * vmax) {
                return Err(Error::Precondition(format!("weighted samples do not decay at the ends of the grid for gamma_+ = {gamma_plus}")));
            }
            fft(&mut v, false);
            // reorder to m = -half..half
            let out: Vec<Complex64> = (0..n)
                .map(|idx| {
                    let m = idx as i64 - half as i64;
                    let x = v[m.rem_euclid(n as i64) as usize];
                    x * grid.h * Complex64::new(0.0, -sigma[idx] * grid.t0).exp()
                })
                .collect();
            check_band(&out)?;
            Ok(out)
        }
        Direction::Inverse => {
            check_band(values)?;
            let mut spec = vec![Complex64::new(0.0, 0.0); n];
            for idx in 0..n {
                let m = idx as i64 - half as i64;
                spec[m.rem_euclid(n as i64) as usize] = values[idx] * Complex64::new(0.0, sigma[idx] * grid.t0).exp();
            }
            fft(&mut spec, true);
            let scale = 1.0 / (n as f64 * grid.h);
            Ok(spec.iter().enumerate().map(|(k, z)| z * scale * (gamma_plus * grid.t(k)).exp()).collect())
        }
    }
}

fn check_band(transform: &[Complex64]) -> Result<()> {
    let n = transform.len();
    let peak = max_norm(transform);
    if peak == 0.0 {
        return Ok(());
    }
    let edge = n / 8;
    let outer = transform[..edge].iter().chain(&transform[n - edge..]).fold(0.0f64, |a, z| a.max(z.norm()));
    if outer > BAND_EDGE_TOL * peak {
        return Err(Error::Alias(format!(
            "transform at the band edge is {:.2e} of its peak; refine the grid spacing",
            outer / peak
        )));
    }
    Ok(())
}

/// `||rho^{-gamma_+} u||_{L^2(drho/rho)}` by the trapezoid rule in `log rho`.
pub fn weighted_norm(grid: &MellinGrid, u: &[Complex64], gamma_plus: f64) -> f64 {
    let s: f64 = u.iter().enumerate().map(|(k, u)| (u * (-gamma_plus * grid.t(k)).exp()).norm_sqr()).sum();
    (s * grid.h).sqrt()
}

/// `((2 pi)^{-1} int |F|^2 d sigma)^{1/2}` on the dual grid.
pub fn line_norm(grid: &MellinGrid, transform: &[Complex64]) -> f64 {
    let s: f64 = transform.iter().map(|z| z.norm_sqr()).sum();
    (s * grid.d_sigma() / (2.0 * PI)).sqrt()
}
