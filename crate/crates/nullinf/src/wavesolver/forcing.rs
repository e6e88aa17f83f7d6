//! Forcing terms and the radial reduction of the wave operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest spherical mode the solver accepts.
pub const MAX_MODE: usize = 8;

/// Wave operator on `R^{1+n}`: `d_t^2 - Laplacian`, optionally with the
/// first-order term `(2 p1 / r) d_t` that shifts the decay rate at null
/// infinity from `r^{-(n-1)/2}` to `r^{-(n-1)/2 - p1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaveOperator {
    Minkowski,
    ModelP1 { p1: f64 },
}

impl WaveOperator {
    pub fn p1(&self) -> f64 {
        match *self {
            WaveOperator::Minkowski => 0.0,
            WaveOperator::ModelP1 { p1 } => p1,
        }
    }
}

/// `A * b((t - t_c) / t_w) * b((r - r_c) / r_w) * Y_ell` with the polynomial
/// bump `b(z) = (1 - z^2)^order` on `|z| < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForcingSpec {
    pub amplitude: f64,
    /// Support in `t`.
    pub t_range: [f64; 2],
    /// Support in `r`.
    pub r_range: [f64; 2],
    /// Bump exponent; the profile is `C^{order - 1}`.
    pub order: u32,
    /// Spherical harmonic degree.
    pub ell: usize,
}

impl Default for ForcingSpec {
    fn default() -> Self {
        Self { amplitude: 1.0, t_range: [0.0, 1.0], r_range: [2.5, 3.5], order: 6, ell: 0 }
    }
}

pub(crate) fn bump_profile(z: f64, order: u32) -> f64 {
    if z.abs() < 1.0 {
        (1.0 - z * z).powi(order as i32)
    } else {
        0.0
    }
}

impl ForcingSpec {
    pub fn validate(&self) -> Result<()> {
        let [t0, t1] = self.t_range;
        let [r0, r1] = self.r_range;
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::Invalid(format!("forcing time support [{t0}, {t1}] is empty")));
        }
        if !(r0.is_finite() && r1.is_finite() && 0.0 <= r0 && r0 < r1) {
            return Err(Error::Invalid(format!("forcing radial support [{r0}, {r1}] must satisfy 0 <= r0 < r1")));
        }
        if self.order == 0 || !self.amplitude.is_finite() {
            return Err(Error::Invalid("bump order must be positive and the amplitude finite".into()));
        }
        if self.ell > MAX_MODE {
            return Err(Error::UnsupportedMode(format!("ell = {} > {MAX_MODE}", self.ell)));
        }
        Ok(())
    }

    /// Radial profile of the mode coefficient.
    pub fn value(&self, t: f64, r: f64) -> f64 {
        let [t0, t1] = self.t_range;
        let [r0, r1] = self.r_range;
        let zt = (2.0 * t - t0 - t1) / (t1 - t0);
        let zr = (2.0 * r - r0 - r1) / (r1 - r0);
        self.amplitude * bump_profile(zt, self.order) * bump_profile(zr, self.order)
    }

    /// Range of `t - r` over the support.
    pub fn retarded_range(&self) -> (f64, f64) {
        (self.t_range[0] - self.r_range[1], self.t_range[1] - self.r_range[0])
    }

    /// Range of `t + r` over the support.
    pub fn advanced_range(&self) -> (f64, f64) {
        (self.t_range[0] + self.r_range[0], self.t_range[1] + self.r_range[1])
    }

    /// Support inside the exterior domain `0 <= t <= r - 1`.
    pub fn inside_exterior(&self) -> bool {
        self.t_range[0] >= 0.0 && self.t_range[1] <= self.r_range[0] - 1.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { amplitude: self.amplitude * factor, ..*self }
    }
}

/// `ell (ell + n - 2)`, the spherical Laplacian eigenvalue.
pub fn sphere_eigenvalue(n: usize, ell: usize) -> f64 {
    (ell * (ell + n - 2)) as f64
}

/// Potential of the reduced equation for `psi = r^{(n-1)/2} u`.
pub fn mode_potential(n: usize, ell: usize, r: f64) -> f64 {
    let nf = n as f64;
    (sphere_eigenvalue(n, ell) + 0.25 * (nf - 1.0) * (nf - 3.0)) / (r * r)
}

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedMode(format!("space dimension n = {n}; the solver supports n = 2, 3")))
    }
}
