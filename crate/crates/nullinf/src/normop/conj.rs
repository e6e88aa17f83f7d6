//! Conjugation of the reduced operator to `1/2 (x D_x)^2 - 1/2 lambda~^2 + x^2`
//! and the integration-by-parts identity behind its injectivity.
//!
//! With `c = q1 + i lambda`, `x^{-c} (x D_x) x^c = x D_x - i c`, so for
//! `p0 = 0` the two factors become `x D_x + lambda~` and `x D_x - lambda~`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::op::ReducedNormalOp;
use super::reduced::Collocation;
use crate::error::{Error, Result};

fn conj_exponent(op: &ReducedNormalOp) -> Complex64 {
    Complex64::new(op.q1, 0.0) + Complex64::i() * op.lambda
}

/// `u~ = x^{-q1 - i lambda} u`.
pub fn conjugate(op: &ReducedNormalOp, x: &[f64], u: &[Complex64]) -> Vec<Complex64> {
    let c = conj_exponent(op);
    x.iter().zip(u).map(|(x, u)| u * (-c * x.ln()).exp()).collect()
}

/// `u = x^{q1 + i lambda} u~`.
pub fn unconjugate(op: &ReducedNormalOp, x: &[f64], ut: &[Complex64]) -> Vec<Complex64> {
    let c = conj_exponent(op);
    x.iter().zip(ut).map(|(x, u)| u * (c * x.ln()).exp()).collect()
}

/// `(1/2 (x D_x)^2 - 1/2 lambda~^2 + x^2) v` at the collocation nodes.
pub fn apply_simplified(op: &ReducedNormalOp, colloc: &Collocation, v: &[Complex64]) -> Vec<Complex64> {
    let lt = op.lambda_tilde();
    let d2 = colloc.d2_ds2(v);
    v.iter().zip(&d2).zip(&colloc.x).map(|((v, d2), x)| -0.5 * d2 - 0.5 * lt * lt * v + x * x * v).collect()
}

fn interior_norm(colloc: &Collocation, v: &[Complex64]) -> f64 {
    let m = colloc.len();
    colloc.cheb.weights[1..m - 1].iter().zip(&v[1..m - 1]).map(|(w, v)| w * v.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative interior residual of the simplified operator applied to the
/// conjugate of `u`, normalised by the sizes of its three terms.
pub fn conjugation_residual(op: &ReducedNormalOp, colloc: &Collocation, u: &[Complex64]) -> Result<f64> {
    if op.p0 != 0.0 {
        return Err(Error::Precondition(format!("conjugation requires p0 = 0, got {}", op.p0)));
    }
    if u.len() != colloc.len() {
        return Err(Error::Invalid("sample count does not match the grid".into()));
    }
    let ut = conjugate(op, &colloc.x, u);
    let r = apply_simplified(op, colloc, &ut);
    let scale = term_scale(op, colloc, &ut);
    Ok(if scale == 0.0 { 0.0 } else { interior_norm(colloc, &r) / scale })
}

fn terms(op: &ReducedNormalOp, colloc: &Collocation, ut: &[Complex64]) -> [Vec<Complex64>; 3] {
    let lt = op.lambda_tilde();
    [
        colloc.d2_ds2(ut).iter().map(|d| 0.5 * d).collect(),
        ut.iter().map(|v| 0.5 * lt * lt * v).collect(),
        ut.iter().zip(&colloc.x).map(|(v, x)| x * x * v).collect(),
    ]
}

/// Sum of the interior norms of the three terms of the simplified operator.
fn term_scale(op: &ReducedNormalOp, colloc: &Collocation, ut: &[Complex64]) -> f64 {
    terms(op, colloc, ut).iter().map(|t| interior_norm(colloc, t)).sum()
}

/// Difference between `P u` and `x^c` times the simplified operator applied
/// to `x^{-c} u`, both evaluated by collocation, relative to the sizes of
/// the three terms mapped back by `x^c`.
pub fn two_path_defect(op: &ReducedNormalOp, colloc: &Collocation, u: &[Complex64]) -> Result<f64> {
    if op.p0 != 0.0 {
        return Err(Error::Precondition(format!("conjugation requires p0 = 0, got {}", op.p0)));
    }
    let ut = conjugate(op, &colloc.x, u);
    let pu = colloc.apply(op, u);
    let lu = unconjugate(op, &colloc.x, &apply_simplified(op, colloc, &ut));
    let diff: Vec<Complex64> = pu.iter().zip(&lu).map(|(a, b)| a - b).collect();
    let scale: f64 = terms(op, colloc, &ut).iter().map(|t| interior_norm(colloc, &unconjugate(op, &colloc.x, t))).sum();
    Ok(if scale == 0.0 { 0.0 } else { interior_norm(colloc, &diff) / scale })
}

/// Solution of the simplified homogeneous equation in the interior with
/// `v = 1` at `x_min` and `v = 0` at `x_max`.
pub fn simplified_kernel(op: &ReducedNormalOp, colloc: &Collocation) -> Result<Vec<Complex64>> {
    let m = colloc.len();
    let lt = op.lambda_tilde();
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    let d2 = colloc.d2_ds2_matrix();
    for r in 1..m - 1 {
        for c in 0..m {
            a[(r, c)] = -0.5 * d2[(r, c)];
        }
        a[(r, r)] += -0.5 * lt * lt + colloc.x[r] * colloc.x[r];
    }
    // nodes run from x_max (index 0) down to x_min
    a[(0, 0)] = Complex64::from(1.0);
    a[(m - 1, m - 1)] = Complex64::from(1.0);
    let mut rhs = DVector::<Complex64>::zeros(m);
    rhs[m - 1] = Complex64::from(1.0);
    let v = a.lu().solve(&rhs).ok_or_else(|| Error::NoConvergence("singular boundary problem".into()))?;
    Ok(v.as_slice().to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectivityIdentity {
    /// `2 Re(lambda~) Im(lambda~) ||v||^2`.
    pub quadratic: f64,
    /// `-Im <L v, v>` with `L = (x D_x)^2 - lambda~^2 + 2 x^2`.
    pub pairing: f64,
    /// Real part: `||d_s v||^2 - Re(lambda~^2) ||v||^2 + 2 ||x v||^2`.
    pub energy: f64,
    /// `Re <L v, v>`.
    pub energy_pairing: f64,
}

/// Both sides of the imaginary and real parts of `<L v, v>` after
/// integration by parts, for `v` vanishing at the ends of the grid.
pub fn injectivity_identity(op: &ReducedNormalOp, colloc: &Collocation, v: &[Complex64]) -> InjectivityIdentity {
    let lt = op.lambda_tilde();
    let lv: Vec<Complex64> = apply_simplified(op, colloc, v).into_iter().map(|z| 2.0 * z).collect();
    let pairing = colloc.inner(&lv, v);
    let n2 = colloc.norm(v).powi(2);
    let dv = colloc.d_ds(v);
    let xv: Vec<Complex64> = v.iter().zip(&colloc.x).map(|(v, x)| v * x).collect();
    InjectivityIdentity {
        quadratic: 2.0 * lt.re * lt.im * n2,
        pairing: -pairing.im,
        energy: colloc.norm(&dv).powi(2) - (lt * lt).re * n2 + 2.0 * colloc.norm(&xv).powi(2),
        energy_pairing: pairing.re,
    }
}
