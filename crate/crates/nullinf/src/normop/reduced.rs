//! Collocation solves of the reduced normal operator on weighted spaces.
//!
//! With `u = x^{2 gamma_I} w` and `s = log x`, the operator becomes
//! `P_gamma = 1/2 (-(d_s + 2 gamma)^2 + B (d_s + 2 gamma) - 4 i q1 lambda) + x^2 + p0`
//! with `B = 2 i lambda + 2 q1`, acting on `L^2(ds)`. It is
//! discretised by Chebyshev collocation on `[log x_min, log x_max]` with
//! Dirichlet conditions at both ends.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::op::ReducedNormalOp;
use crate::error::{Error, Result};
use crate::numerics::cheb::Chebyshev;

/// Relative residual above which a solve is reported as unconverged.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReducedGrid {
    pub x_min: f64,
    pub x_max: f64,
    /// Chebyshev degree in `log x`.
    pub degree: usize,
}

impl Default for ReducedGrid {
    fn default() -> Self {
        Self { x_min: 1e-6, x_max: 40.0, degree: 240 }
    }
}

/// Collocation nodes in `s = log x` with differentiation matrices.
#[derive(Clone, Debug)]
pub struct Collocation {
    pub grid: ReducedGrid,
    pub cheb: Chebyshev,
    pub x: Vec<f64>,
    d1: DMatrix<Complex64>,
    d2: DMatrix<Complex64>,
}

impl Collocation {
    pub fn new(grid: &ReducedGrid) -> Result<Self> {
        if !(grid.x_min > 0.0 && grid.x_max > grid.x_min && grid.degree >= 8) {
            return Err(Error::Invalid(format!("bad reduced grid {grid:?}")));
        }
        let cheb = Chebyshev::new(grid.degree, grid.x_min.ln(), grid.x_max.ln());
        let x = cheb.nodes.iter().map(|s| s.exp()).collect();
        let d1 = cheb.d1.map(Complex64::from);
        let d2 = &d1 * &d1;
        Ok(Self { grid: *grid, cheb, x, d1, d2 })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `L^2(ds)` norm of nodal values.
    pub fn norm(&self, v: &[Complex64]) -> f64 {
        self.cheb.weights.iter().zip(v).map(|(w, v)| w * v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `int f conj(g) ds` by Clenshaw–Curtis quadrature.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        self.cheb.weights.iter().zip(f.iter().zip(g)).map(|(w, (f, g))| *w * f * g.conj()).sum()
    }

    pub fn d_ds(&self, v: &[Complex64]) -> Vec<Complex64> {
        (&self.d1 * DVector::from_column_slice(v)).as_slice().to_vec()
    }

    pub fn d2_ds2_matrix(&self) -> &DMatrix<Complex64> {
        &self.d2
    }

    pub fn d2_ds2(&self, v: &[Complex64]) -> Vec<Complex64> {
        (&self.d2 * DVector::from_column_slice(v)).as_slice().to_vec()
    }

    /// Full collocation matrix of `P_gamma`.
    pub fn conjugated_matrix(&self, op: &ReducedNormalOp, gamma_i: f64) -> DMatrix<Complex64> {
        let m = self.len();
        let i = Complex64::i();
        let g2 = Complex64::from(2.0 * gamma_i);
        let b = 2.0 * i * op.lambda + 2.0 * op.q1;
        let c0 = -4.0 * i * op.q1 * op.lambda;
        // (d + g2)^2 = d2 + 2 g2 d + g2^2
        let mut a = &self.d2 * Complex64::from(-0.5) + &self.d1 * (-g2 + 0.5 * b);
        let diag0 = 0.5 * (-g2 * g2 + b * g2 + c0) + op.p0;
        for k in 0..m {
            a[(k, k)] += diag0 + self.x[k] * self.x[k];
        }
        a
    }

    /// `P u` for nodal values of `u` (unweighted operator).
    pub fn apply(&self, op: &ReducedNormalOp, u: &[Complex64]) -> Vec<Complex64> {
        let a = self.conjugated_matrix(op, 0.0);
        (a * DVector::from_column_slice(u)).as_slice().to_vec()
    }

    fn interior(&self, a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let m = self.len();
        a.view((1, 1), (m - 2, m - 2)).into_owned()
    }

    /// Interior operator in `L^2(ds)`-orthonormal coordinates.
    fn weighted_interior(&self, op: &ReducedNormalOp, gamma_i: f64) -> DMatrix<Complex64> {
        let mut a = self.interior(&self.conjugated_matrix(op, gamma_i));
        let sq: Vec<f64> = self.cheb.weights[1..self.len() - 1].iter().map(|w| w.sqrt()).collect();
        for r in 0..a.nrows() {
            for c in 0..a.ncols() {
                a[(r, c)] *= sq[r] / sq[c];
            }
        }
        a
    }

    /// Smallest singular value of `P_gamma` on `L^2(ds)`.
    pub fn sigma_min(&self, op: &ReducedNormalOp, gamma_i: f64) -> f64 {
        let a = self.weighted_interior(op, gamma_i);
        a.singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Approximate kernel element of `P_gamma` by inverse iteration on
    /// `P^* P`, returned as nodal values of `u = x^{2 gamma} w` with unit
    /// weighted norm, together with the Rayleigh estimate of `sigma_min`.
    pub fn near_kernel(&self, op: &ReducedNormalOp, gamma_i: f64, iterations: usize) -> Result<(Vec<Complex64>, f64)> {
        let a = self.weighted_interior(op, gamma_i);
        let lu = a.clone().lu();
        let lua = a.adjoint().lu();
        let k = a.nrows();
        let mut v = DVector::from_fn(k, |r, _| Complex64::new(1.0 + (r as f64 * 0.37).sin(), (r as f64 * 0.11).cos()));
        v /= Complex64::from(v.norm());
        let mut sigma = 0.0;
        for _ in 0..iterations.max(1) {
            let y = lua.solve(&v).ok_or_else(|| Error::NoConvergence("singular collocation matrix".into()))?;
            let z = lu.solve(&y).ok_or_else(|| Error::NoConvergence("singular collocation matrix".into()))?;
            let nz = z.norm();
            sigma = (1.0 / nz).sqrt();
            v = z / Complex64::from(nz);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for r in 0..k {
            let w = self.cheb.weights[r + 1].sqrt();
            out[r + 1] = v[r] / w * self.x[r + 1].powf(2.0 * gamma_i);
        }
        Ok((out, sigma))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedSolution {
    pub x: Vec<f64>,
    pub u: Vec<Complex64>,
    pub gamma_i: f64,
    /// `||P_gamma w - x^{-2 gamma} f|| / ||x^{-2 gamma} f||` in `L^2(ds)`.
    pub residual: f64,
    pub sigma_min: Option<f64>,
}

/// Solve `P u = f` with `u` in `x^{2 gamma_I} L^2(dx/x)` and rapidly
/// decaying as `x -> infinity`. `f` is sampled at the collocation nodes.
pub fn solve_reduced(
    op: &ReducedNormalOp,
    f: &[Complex64],
    gamma_i: f64,
    colloc: &Collocation,
    with_sigma: bool,
) -> Result<ReducedSolution> {
    op.check_gamma(gamma_i)?;
    let m = colloc.len();
    if f.len() != m {
        return Err(Error::Invalid(format!("right-hand side has {} samples for {m} nodes", f.len())));
    }
    let g: Vec<Complex64> = f.iter().zip(&colloc.x).map(|(f, x)| f * x.powf(-2.0 * gamma_i)).collect();
    let gmax = g.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if gmax > 0.0 && (g[0].norm() > 1e-8 * gmax || g[m - 1].norm() > 1e-8 * gmax) {
        return Err(Error::Precondition("right-hand side does not decay at the ends of the grid".into()));
    }
    let a = colloc.interior(&colloc.conjugated_matrix(op, gamma_i));
    let rhs = DVector::from_iterator(m - 2, g[1..m - 1].iter().cloned());
    let w = if gmax == 0.0 {
        DVector::zeros(m - 2)
    } else {
        a.clone().lu().solve(&rhs).ok_or_else(|| Error::NoConvergence("singular collocation matrix".into()))?
    };
    let res_vec = &a * &w - &rhs;
    let wts = &colloc.cheb.weights[1..m - 1];
    let wn = |v: &DVector<Complex64>| v.iter().zip(wts).map(|(v, w)| w * v.norm_sqr()).sum::<f64>().sqrt();
    let residual = if gmax == 0.0 { 0.0 } else { wn(&res_vec) / wn(&rhs) };
    if !(residual < RESIDUAL_TOL) {
        return Err(Error::NoConvergence(format!("collocation residual {residual:e}")));
    }
    let mut u = vec![Complex64::new(0.0, 0.0); m];
    for k in 1..m - 1 {
        u[k] = w[k - 1] * colloc.x[k].powf(2.0 * gamma_i);
    }
    let sigma_min = with_sigma.then(|| colloc.sigma_min(op, gamma_i));
    Ok(ReducedSolution { x: colloc.x.clone(), u, gamma_i, residual, sigma_min })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaSample {
    pub lambda: Complex64,
    pub gamma_i: f64,
    pub admissible: bool,
    pub sigma_min: f64,
}

/// `sigma_min` over a grid of spectral parameters and weights.
pub fn sigma_scan(base: &ReducedNormalOp, lambdas: &[Complex64], gammas: &[f64], colloc: &Collocation) -> Vec<SigmaSample> {
    let pairs: Vec<(Complex64, f64)> = lambdas.iter().flat_map(|l| gammas.iter().map(move |g| (*l, *g))).collect();
    pairs
        .into_par_iter()
        .map(|(lambda, gamma_i)| {
            let op = ReducedNormalOp { lambda, ..*base };
            SigmaSample { lambda, gamma_i, admissible: op.check_gamma(gamma_i).is_ok(), sigma_min: colloc.sigma_min(&op, gamma_i) }
        })
        .collect()
}
