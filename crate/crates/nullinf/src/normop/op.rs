//! The reduced normal operator and its boundary spectrum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::fit::weighted_line;
use crate::numerics::ode::{integrate, DopriOptions, OdeSystem};

/// Discriminants below this magnitude count as a double root.
pub const COINCIDENCE_TOL: f64 = 1e-10;

/// `P = 1/2 (x D_x - 2 i^{-1} q1)(x D_x - 2 lambda) + x^2 + p0` on the half
/// line, `D_x = -i d/dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedNormalOp {
    pub lambda: Complex64,
    pub q1: f64,
    pub p0: f64,
    pub n: usize,
}

impl ReducedNormalOp {
    /// Operator with `q1 = (n - 1)/2 + p1_plus` and `p0 = 0`.
    pub fn new(n: usize, p1_plus: f64, lambda: Complex64) -> Self {
        Self { lambda, q1: 0.5 * (n as f64 - 1.0) + p1_plus, p0: 0.0, n }
    }

    pub fn with_p0(self, p0: f64) -> Self {
        Self { p0, ..self }
    }

    /// `lambda + i q1`.
    pub fn lambda_tilde(&self) -> Complex64 {
        self.lambda + Complex64::new(0.0, self.q1)
    }

    /// Admissible weights `-Im lambda < gamma_I < q1`.
    pub fn gamma_window(&self) -> (f64, f64) {
        (-self.lambda.im, self.q1)
    }

    pub fn check_gamma(&self, gamma_i: f64) -> Result<()> {
        let (lo, hi) = self.gamma_window();
        if gamma_i > lo && gamma_i < hi {
            Ok(())
        } else {
            Err(Error::ThresholdViolation(format!("gamma_I = {gamma_i} outside ({lo}, {hi})")))
        }
    }

    /// Mellin-transformed normal operator at `x = 0`,
    /// `1/2 (zeta + 2 i q1)(zeta - 2 lambda) + p0`.
    pub fn indicial(&self, zeta: Complex64) -> Complex64 {
        0.5 * (zeta + Complex64::new(0.0, 2.0 * self.q1)) * (zeta - 2.0 * self.lambda) + self.p0
    }

    /// Coefficients `(b, c)` of the homogeneous equation
    /// `u'' = b u' + c u` in `s = log x`, without the `2 x^2` term.
    pub(crate) fn log_coefficients(&self) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let b = 2.0 * i * self.lambda + 2.0 * self.q1;
        let c = -4.0 * i * self.q1 * self.lambda + 2.0 * self.p0;
        (b, c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpectrum {
    /// Roots `zeta` of the indicial polynomial.
    pub zetas: [Complex64; 2],
    /// Exponents `a = i zeta` of the homogeneous solutions `x^a`.
    pub exponents: [Complex64; 2],
    /// Whether the two roots coincide.
    pub double_root: bool,
}

pub fn boundary_spectrum(op: &ReducedNormalOp) -> BoundarySpectrum {
    let a = Complex64::new(0.0, -2.0 * op.q1);
    let b = 2.0 * op.lambda;
    let zetas = if op.p0 == 0.0 {
        [b, a]
    } else {
        let disc = ((a - b) * (a - b) - 8.0 * op.p0).sqrt();
        [0.5 * (a + b + disc), 0.5 * (a + b - disc)]
    };
    let double_root = (zetas[0] - zetas[1]).norm() < COINCIDENCE_TOL;
    let i = Complex64::i();
    BoundarySpectrum { zetas, exponents: [i * zetas[0], i * zetas[1]], double_root }
}

struct Homogeneous {
    b: Complex64,
    c: Complex64,
}

impl OdeSystem for Homogeneous {
    fn rhs(&self, s: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let u = Complex64::new(y[0], y[1]);
        let du = Complex64::new(y[2], y[3]);
        let x2 = (2.0 * s).exp();
        let d2 = self.b * du + (self.c + 2.0 * x2) * u;
        dy.copy_from_slice(&[du.re, du.im, d2.re, d2.im]);
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub expected: Complex64,
    pub fitted: Complex64,
    pub samples: usize,
}

/// Homogeneous solution of the full operator started on the branch
/// `x^a (1 + c x^2)` at `x_start` and integrated outward; the complex
/// exponent is fitted to `log u` against `log x` on `[x_lo, x_hi]`.
pub fn shoot_exponent(op: &ReducedNormalOp, a: Complex64, x_start: f64, window: (f64, f64), samples: usize) -> Result<ExponentFit> {
    let (x_lo, x_hi) = window;
    if !(x_start > 0.0 && x_start <= x_lo && x_lo < x_hi && samples >= 3) {
        return Err(Error::Invalid(format!("bad shooting window {x_start}, [{x_lo}, {x_hi}]")));
    }
    // P x^e = poly(e) x^e + x^{e+2}; first Frobenius correction
    let poly = |e: Complex64| op.indicial(-Complex64::i() * e);
    let den = poly(a + 2.0);
    let c = if den.norm() > 1e-8 { -1.0 / den } else { Complex64::new(0.0, 0.0) };
    let s0 = x_start.ln();
    let x2 = x_start * x_start;
    let u0 = (a * s0).exp() * (1.0 + c * x2);
    let du0 = (a * s0).exp() * (a * (1.0 + c * x2) + 2.0 * c * x2);
    let (b, cc) = op.log_coefficients();
    let mut sys = Homogeneous { b, c: cc };
    let opts = DopriOptions { rtol: 1e-13, atol: 1e-300, h_init: 1e-3, h_max: 0.05, ..DopriOptions::default() };
    let mut y = vec![u0.re, u0.im, du0.re, du0.im];
    let mut s = s0;
    let (s_lo, s_hi) = (x_lo.ln(), x_hi.ln());
    let mut ss = Vec::with_capacity(samples);
    let mut logs: Vec<Complex64> = Vec::with_capacity(samples);
    for k in 0..samples {
        let target = s_lo + (s_hi - s_lo) * k as f64 / (samples - 1) as f64;
        if target > s {
            y = integrate(&mut sys, s, y, target, &opts)?.y;
            s = target;
        }
        let u = Complex64::new(y[0], y[1]);
        let mut l = u.ln();
        // unwrap the phase
        if let Some(prev) = logs.last() {
            let two_pi = 2.0 * std::f64::consts::PI;
            l.im += two_pi * ((prev.im - l.im) / two_pi).round();
        }
        ss.push(s);
        logs.push(l);
    }
    let ws = vec![1.0; samples];
    let re = weighted_line(&ss, &logs.iter().map(|l| l.re).collect::<Vec<_>>(), &ws)?;
    let im = weighted_line(&ss, &logs.iter().map(|l| l.im).collect::<Vec<_>>(), &ws)?;
    Ok(ExponentFit { expected: a, fitted: Complex64::new(re.slope, im.slope), samples })
}
