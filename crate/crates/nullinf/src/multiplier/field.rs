//! Weighted multiplier vector fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChartId;

/// Shifted weights `check_alpha0 = alpha0 + 1`, `check_alpha_i = alpha_i + 1/2`,
/// `check_alpha_plus = alpha_plus + 1` (so that `(check_alpha0, 2 check_alpha_i)`
/// is `(alpha0, 2 alpha_i) + (1, 1)`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierField {
    pub check_alpha0: f64,
    pub check_alpha_i: f64,
    pub check_alpha_plus: f64,
    /// In `(0, 2)`.
    pub c: f64,
    pub chart: ChartId,
}

impl MultiplierField {
    pub fn new(check_alpha0: f64, check_alpha_i: f64, check_alpha_plus: f64, c: f64, chart: ChartId) -> Result<Self> {
        let f = Self { check_alpha0, check_alpha_i, check_alpha_plus, c, chart };
        f.validate()?;
        Ok(f)
    }

    /// From the unshifted weights `(alpha0, alpha_i, alpha_plus)`.
    pub fn from_weights(alpha0: f64, alpha_i: f64, alpha_plus: f64, c: f64, chart: ChartId) -> Result<Self> {
        Self::new(alpha0 + 1.0, alpha_i + 0.5, alpha_plus + 1.0, c, chart)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c < 2.0) {
            return Err(Error::Invalid(format!("c = {} outside (0, 2)", self.c)));
        }
        Ok(())
    }

    /// Frame components of `W` in `(rho d_rho, x d_x)`.
    pub fn w_components(&self) -> [f64; 2] {
        w_components(self.chart, self.c)
    }

    /// Exponents `(a, b)` of the weight `rho^a x^b` multiplying `W` in `V`.
    pub fn weight_exponents(&self) -> (f64, f64) {
        let a = if self.chart.is_near_i0() { -2.0 * self.check_alpha0 } else { -2.0 * self.check_alpha_plus };
        (a, -4.0 * self.check_alpha_i)
    }

    /// Exponents `(a, b)` such that the deformation tensor is
    /// `rho^a x^b` times a bounded tensor.
    pub fn tensor_weight_exponents(&self) -> (f64, f64) {
        let (a, b) = self.weight_exponents();
        (a + 2.0, b + 2.0)
    }

    /// Frame components of `V` at `(rho, x)`, padded with zeros.
    pub fn v_components(&self, rho: f64, x: f64, dim: usize) -> Vec<f64> {
        let (a, b) = self.weight_exponents();
        let w = rho.powf(a) * x.powf(b);
        let wc = self.w_components();
        let mut v = vec![0.0; dim];
        v[0] = w * wc[0];
        v[1] = w * wc[1];
        v
    }
}

/// `W = -x d_x + (2 - c) rho d_rho` near spatial infinity,
/// `W = x d_x - (2 + c) rho d_rho` near timelike infinity; frame components.
pub fn w_components(chart: ChartId, c: f64) -> [f64; 2] {
    if chart.is_near_i0() {
        [2.0 - c, -1.0]
    } else {
        [-(2.0 + c), 1.0]
    }
}
