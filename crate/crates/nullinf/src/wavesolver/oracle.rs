//! Independent reference for `n = 3`, `ell = 0`: with `psi = r u` the
//! equation is the flat 1+1 wave equation on the half line with a Dirichlet
//! condition, solved by Duhamel's formula after odd reflection.

use super::forcing::{bump_profile, ForcingSpec, WaveOperator};
use super::grid::GridSpec;
use super::solve::{default_u_min, SolutionField};
use crate::error::{Error, Result};
use crate::numerics::quad::{gauss_legendre, integrate};

/// Gauss rule sizes integrating one forcing term exactly.
pub fn exact_rule_sizes(f: &ForcingSpec) -> (usize, usize) {
    let k = f.order as usize;
    (k + 2, 2 * k + 2)
}

struct Term<'a> {
    f: &'a ForcingSpec,
    radial_rule: (Vec<f64>, Vec<f64>),
    time_rule: (Vec<f64>, Vec<f64>),
}

impl Term<'_> {
    fn radial(&self, rho: f64) -> f64 {
        let [r0, r1] = self.f.r_range;
        rho * bump_profile((2.0 * rho - r0 - r1) / (r1 - r0), self.f.order)
    }

    fn temporal(&self, s: f64) -> f64 {
        let [t0, t1] = self.f.t_range;
        self.f.amplitude * bump_profile((2.0 * s - t0 - t1) / (t1 - t0), self.f.order)
    }

    /// Antiderivative of the odd extension of `rho f(rho)`, vanishing at
    /// `-infinity`; it is even.
    fn antiderivative(&self, z: f64) -> f64 {
        let w = z.abs();
        let [r0, r1] = self.f.r_range;
        if w >= r1 {
            return 0.0;
        }
        -integrate(|rho| self.radial(rho), w.max(r0), r1, &self.radial_rule)
    }

    fn psi(&self, t: f64, r: f64) -> f64 {
        let [t0, t1] = self.f.t_range;
        let hi = t.min(t1);
        if hi <= t0 {
            return 0.0;
        }
        let [r0, r1] = self.f.r_range;
        let mut cuts = vec![t0, hi];
        for c in [r + t - r0, r + t - r1, t - r, t - r + r0, t - r - r0, t - r + r1, t - r - r1] {
            if c > t0 && c < hi {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 0.0 {
                continue;
            }
            total += integrate(
                |s| self.temporal(s) * (self.antiderivative(r + t - s) - self.antiderivative(r - t + s)),
                w[0],
                w[1],
                &self.time_rule,
            );
        }
        0.5 * total
    }
}

/// `r u` at `(t, r)` for the forward solution of `(d_t^2 - Laplacian) u = f`
/// in three space dimensions, spherically symmetric forcing. `extra_points`
/// enlarges both Gauss rules beyond the sizes that are exact.
pub fn dalembert_psi(forcing: &[ForcingSpec], t: f64, r: f64, extra_points: usize) -> Result<f64> {
    if r < 0.0 || !t.is_finite() || !r.is_finite() {
        return Err(Error::Domain(format!("(t, r) = ({t}, {r})")));
    }
    let mut total = 0.0;
    for f in forcing {
        f.validate()?;
        if f.ell != 0 {
            return Err(Error::Precondition("the oracle covers the spherically symmetric mode only".into()));
        }
        let (nr, nt) = exact_rule_sizes(f);
        if nr + extra_points > 64 || nt + extra_points > 64 {
            return Err(Error::Quadrature(format!("rule size {} exceeds 64 points", nt + extra_points)));
        }
        let term = Term { f, radial_rule: gauss_legendre(nr + extra_points), time_rule: gauss_legendre(nt + extra_points) };
        total += term.psi(t, r);
    }
    if !total.is_finite() {
        return Err(Error::Quadrature("non-finite quadrature value".into()));
    }
    Ok(total)
}

/// Mode amplitude `u` from the oracle; `r > 0`.
pub fn dalembert_value(forcing: &[ForcingSpec], t: f64, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("r = {r} must be positive")));
    }
    Ok(dalembert_psi(forcing, t, r, 2)? / r)
}

/// Oracle values at every node of the grid described by `spec`.
pub fn dalembert_oracle(forcing: &[ForcingSpec], spec: &GridSpec) -> Result<SolutionField> {
    let u_min = spec.u_min.unwrap_or_else(|| default_u_min(forcing, spec.du));
    let grid = spec.build(u_min)?;
    SolutionField::from_nodes(3, WaveOperator::Minkowski, forcing, grid, |t, r| dalembert_psi(forcing, t, r, 2))
}
