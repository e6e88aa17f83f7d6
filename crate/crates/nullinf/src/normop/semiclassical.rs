//! Radial sets of the semiclassical rescaling at `x_I = 0`.
//!
//! At `zeta = sign` the principal symbol near the boundary is
//! `p = 1/2 xi (xi - 2 sign) + |eta|^2` and, for the flat model
//! `k = identity`, its Hamiltonian vector field in `(x, y; xi, eta)` is
//! `2 (xi - sign)(x d_x + eta d_eta) - 2 |eta|^2 d_xi + 4 x eta d_y`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Phase-space point `(x, y; xi, eta)` with `y, eta` in `R^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: Vec<f64>,
    pub xi: f64,
    pub eta: Vec<f64>,
}

impl PhasePoint {
    pub fn at_boundary(xi: f64, m: usize) -> Self {
        Self { x: 0.0, y: vec![0.0; m], xi, eta: vec![0.0; m] }
    }

    /// Packed as `[x, y.., xi, eta..]`.
    pub fn pack(&self) -> Vec<f64> {
        let mut v = vec![self.x];
        v.extend(&self.y);
        v.push(self.xi);
        v.extend(&self.eta);
        v
    }

    pub fn unpack(v: &[f64], m: usize) -> Self {
        Self { x: v[0], y: v[1..=m].to_vec(), xi: v[m + 1], eta: v[m + 2..].to_vec() }
    }
}

fn check_sign(sign: i32) -> Result<f64> {
    match sign {
        1 | -1 => Ok(sign as f64),
        _ => Err(Error::Invalid(format!("sign must be +1 or -1, got {sign}"))),
    }
}

pub fn symbol(sign: i32, p: &PhasePoint) -> Result<f64> {
    let s = check_sign(sign)?;
    let eta2: f64 = p.eta.iter().map(|e| e * e).sum();
    Ok(0.5 * p.xi * (p.xi - 2.0 * s) + eta2)
}

/// Hamiltonian vector field, packed like [`PhasePoint::pack`].
pub fn hamiltonian_field(sign: i32, p: &PhasePoint) -> Result<Vec<f64>> {
    let s = check_sign(sign)?;
    let m = p.eta.len();
    let eta2: f64 = p.eta.iter().map(|e| e * e).sum();
    let a = 2.0 * (p.xi - s);
    let mut v = vec![a * p.x];
    v.extend(p.eta.iter().map(|e| 4.0 * p.x * e));
    v.push(-2.0 * eta2);
    v.extend(p.eta.iter().map(|e| a * e));
    debug_assert_eq!(v.len(), 2 * m + 2);
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSetReport {
    pub sign: i32,
    /// `xi` on the incoming set (`x = 0`, `eta = 0`).
    pub xi_in: f64,
    /// `xi` on the outgoing set.
    pub xi_out: f64,
    pub field_at_in: f64,
    pub field_at_out: f64,
    /// Smallest field norm over sampled boundary characteristic points at
    /// distance at least `exclusion` from both sets.
    pub min_field_elsewhere: f64,
    pub exclusion: f64,
    /// Eigenvalues of the linearization of `sign * H` in `(x, eta)`.
    pub eigen_in: Vec<f64>,
    pub eigen_out: Vec<f64>,
}

/// Finite-difference Jacobian of `sign * H` restricted to the `(x, eta)`
/// block at a boundary point; returns its (real) eigenvalues.
fn linearization(sign: i32, p: &PhasePoint, h: f64) -> Result<Vec<f64>> {
    let m = p.eta.len();
    let base = p.pack();
    let idx: Vec<usize> = std::iter::once(0).chain((0..m).map(|j| m + 2 + j)).collect();
    let k = idx.len();
    let mut jac = DMatrix::<f64>::zeros(k, k);
    for (c, &ic) in idx.iter().enumerate() {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[ic] += h;
        minus[ic] -= h;
        let fp = hamiltonian_field(sign, &PhasePoint::unpack(&plus, m))?;
        let fm = hamiltonian_field(sign, &PhasePoint::unpack(&minus, m))?;
        for (r, &ir) in idx.iter().enumerate() {
            jac[(r, c)] = sign as f64 * (fp[ir] - fm[ir]) / (2.0 * h);
        }
    }
    let eig = jac.complex_eigenvalues();
    if eig.iter().any(|z| z.im.abs() > 1e-9) {
        return Err(Error::Invalid("complex linearization eigenvalues".into()));
    }
    let mut re: Vec<f64> = eig.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| a.total_cmp(b));
    Ok(re)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Incoming and outgoing radial sets with their verification, for
/// `eta` in `R^m`.
pub fn semiclassical_radial_points(sign: i32, m: usize) -> Result<RadialSetReport> {
    let s = check_sign(sign)?;
    if m == 0 {
        return Err(Error::Invalid("need at least one tangential dimension".into()));
    }
    let (xi_in, xi_out) = (2.0 * s, 0.0);
    let p_in = PhasePoint::at_boundary(xi_in, m);
    let p_out = PhasePoint::at_boundary(xi_out, m);
    let field_at_in = norm(&hamiltonian_field(sign, &p_in)?);
    let field_at_out = norm(&hamiltonian_field(sign, &p_out)?);
    // boundary characteristic set: 1/2 (xi - s)^2 + |eta|^2 = 1/2, a sphere
    // around (xi, eta) = (s, 0); sample it and skip the radial points
    let exclusion = 1e-3;
    let mut min_field = f64::INFINITY;
    let steps = 2000;
    for k in 0..=steps {
        let th = std::f64::consts::PI * k as f64 / steps as f64;
        let xi = s + th.cos();
        let r = th.sin() / 2f64.sqrt();
        for dir in 0..m {
            let mut p = PhasePoint::at_boundary(xi, m);
            p.eta[dir] = r;
            let dist = ((xi - xi_in).powi(2) + r * r).sqrt().min(((xi - xi_out).powi(2) + r * r).sqrt());
            if dist < exclusion {
                continue;
            }
            debug_assert!(symbol(sign, &p)?.abs() < 1e-12);
            min_field = min_field.min(norm(&hamiltonian_field(sign, &p)?));
        }
    }
    Ok(RadialSetReport {
        sign,
        xi_in,
        xi_out,
        field_at_in,
        field_at_out,
        min_field_elsewhere: min_field,
        exclusion,
        eigen_in: linearization(sign, &p_in, 1e-6)?,
        eigen_out: linearization(sign, &p_out, 1e-6)?,
    })
}
