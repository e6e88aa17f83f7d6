//! Central finite differences.

use crate::error::{Error, Result};

/// Fourth-order central difference of `f` at `x0` with step `h`.
pub fn central4<F: Fn(f64) -> f64>(f: &F, x0: f64, h: f64) -> f64 {
    let f1 = f(x0 + h) - f(x0 - h);
    let f2 = f(x0 + 2.0 * h) - f(x0 - 2.0 * h);
    (8.0 * f1 - f2) / (12.0 * h)
}

/// Default step for a coordinate value `c`: `1e-4 (1 + |c|)`.
pub fn default_step(c: f64) -> f64 {
    1e-4 * (1.0 + c.abs())
}

/// Fourth-order derivative with a Richardson consistency check.
///
/// The estimate at `h` is compared with the estimate at `h/2`; when they
/// disagree by more than `tol` (absolute plus relative), the step is halved,
/// down to a floor of `1e-9 (1 + |x0|)`.
pub fn derivative_checked<F: Fn(f64) -> f64>(f: &F, x0: f64, h0: f64, tol: f64) -> Result<f64> {
    let floor = 1e-9 * (1.0 + x0.abs());
    let mut h = h0;
    let mut coarse = central4(f, x0, h);
    loop {
        let fine = central4(f, x0, 0.5 * h);
        if !fine.is_finite() {
            return Err(Error::Step(format!("non-finite derivative at {x0}")));
        }
        if (fine - coarse).abs() <= tol * (1.0 + fine.abs()) {
            return Ok(fine);
        }
        h *= 0.5;
        if h < floor {
            return Err(Error::Step(format!(
                "step underflow at {x0}: estimates {coarse:e} and {fine:e} disagree"
            )));
        }
        coarse = fine;
    }
}
