//! Newton search for the zeros of the rescaled field over null infinity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::classify::radial_distances;
use crate::error::Result;
use crate::geometry::{ChartId, ChartPoint, MetricSpec, SpherePoint};
use crate::hamiltonian::field::rescaled_raw;
use crate::hamiltonian::{compact_symbol, CompactPhasePoint, FiberChart, RadialSetId, Sign};

/// Residual below which a Newton iterate counts as a zero.
pub const ZERO_TOL: f64 = 1e-12;
/// Distance below which a zero is identified with a radial set.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocatedRadialSet {
    pub point: CompactPhasePoint,
    pub id: RadialSetId,
    /// Distance to the exact description of the set.
    pub distance: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RadialSearch {
    /// One representative per radial set, sorted by label.
    pub found: Vec<LocatedRadialSet>,
    /// Converged zeros that match none of the known sets.
    pub unidentified: Vec<CompactPhasePoint>,
}

impl RadialSearch {
    pub fn get(&self, id: RadialSetId) -> Option<&LocatedRadialSet> {
        self.found.iter().find(|f| f.id == id)
    }
}

fn with_unknowns(template: &CompactPhasePoint, u: &[f64]) -> CompactPhasePoint {
    let mut c = template.clone();
    c.base.rho = u[0];
    c.hat.copy_from_slice(&u[1..]);
    c
}

/// `(rho', hat'.., symbol)` at fiber infinity over `x = 0`.
fn residual(m: &MetricSpec, c: &CompactPhasePoint) -> Result<DVector<f64>> {
    let v = rescaled_raw(m, c)?;
    let k = c.base.y.dim();
    let mut r = vec![v[0]];
    r.extend_from_slice(&v[3 + k..]);
    r.push(compact_symbol(m, c)?);
    Ok(DVector::from_vec(r))
}

fn newton(m: &MetricSpec, template: &CompactPhasePoint) -> Result<Option<CompactPhasePoint>> {
    let mut u: Vec<f64> = std::iter::once(template.base.rho).chain(template.hat.iter().copied()).collect();
    let mut f = residual(m, &with_unknowns(template, &u))?;
    for _ in 0..80 {
        if f.amax() < ZERO_TOL {
            return Ok(Some(with_unknowns(template, &u)));
        }
        let h = 1e-7;
        let mut jac = DMatrix::zeros(f.len(), u.len());
        for j in 0..u.len() {
            let mut up = u.clone();
            let mut um = u.clone();
            up[j] += h;
            um[j] -= h;
            let d = (residual(m, &with_unknowns(template, &up))? - residual(m, &with_unknowns(template, &um))?) / (2.0 * h);
            jac.set_column(j, &d);
        }
        let step = match jac.svd(true, true).solve(&f, 1e-12) {
            Ok(s) => s,
            Err(_) => return Ok(None),
        };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let mut trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, b)| a - lambda * b).collect();
            trial[0] = trial[0].max(0.0);
            if trial[1..].iter().any(|v| !v.is_finite() || v.abs() > 1e3) {
                lambda *= 0.5;
                continue;
            }
            let ft = residual(m, &with_unknowns(template, &trial))?;
            if ft.amax() < f.amax() || ft.amax() < ZERO_TOL {
                u = trial;
                f = ft;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Ok((f.amax() < ZERO_TOL && u[0] < 1.0).then(|| with_unknowns(template, &u)))
}

/// Component of the characteristic set containing a unit covector.
fn component_of(c: &CompactPhasePoint) -> Sign {
    let w = c.unit_covector();
    if c.base.chart.is_near_i0() {
        Sign::of(w[1] - w[0])
    } else {
        Sign::of(w[0])
    }
}

fn grid_starts(chart: ChartId, n: usize) -> Vec<CompactPhasePoint> {
    let k = n - 1;
    let etas: Vec<Vec<f64>> = {
        let vals = [-0.8, -0.3, 0.3, 0.8];
        let mut out = Vec::new();
        for &a in &vals {
            let mut e = vec![0.0; k];
            e[0] = a;
            if k > 1 {
                for &b in &[-0.5, 0.5] {
                    let mut e2 = e.clone();
                    e2[1] = b;
                    out.push(e2);
                }
            }
            out.push(e);
        }
        out.push(vec![0.0; k]);
        out
    };
    let mut starts = Vec::new();
    for &rho in &[0.0, 0.3, 0.6] {
        let base = ChartPoint::new(chart, rho, 0.0, SpherePoint::north_pole(k));
        for sign in [Sign::Plus, Sign::Minus] {
            for (fiber, leads) in [
                (FiberChart::ZetaLarge(sign), vec![-1.0, 0.4, 1.6, 2.5]),
                (FiberChart::XiLarge(sign), vec![-0.3, 0.1, 0.35]),
            ] {
                for &lead in &leads {
                    for e in &etas {
                        let mut hat = vec![lead];
                        hat.extend_from_slice(e);
                        starts.push(CompactPhasePoint::new(base.clone(), fiber, 0.0, hat));
                    }
                }
            }
        }
    }
    starts
}

/// Zeros of the rescaled field over null infinity at fiber infinity, refined
/// by Newton's method from a grid and matched against the known radial sets.
pub fn locate_radial_sets(m: &MetricSpec, chart: ChartId) -> Result<RadialSearch> {
    m.validate()?;
    let mut search = RadialSearch::default();
    for start in grid_starts(chart, m.n) {
        let Some(z) = newton(m, &start)? else { continue };
        let best = radial_distances(&z).into_iter().min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((kind, d)) if d < MATCH_TOL => {
                let id = RadialSetId::new(kind, component_of(&z));
                match search.found.iter_mut().find(|f| f.id == id) {
                    Some(f) if f.distance <= d => {}
                    Some(f) => *f = LocatedRadialSet { point: z, id, distance: d },
                    None => search.found.push(LocatedRadialSet { point: z, id, distance: d }),
                }
            }
            _ => {
                if !search.unidentified.iter().any(|u| u.fiber == z.fiber && (u.base.rho - z.base.rho).abs() < 1e-6 && u.hat.iter().zip(&z.hat).all(|(a, b)| (a - b).abs() < 1e-6)) {
                    search.unidentified.push(z);
                }
            }
        }
    }
    search.found.sort_by_key(|f| f.id.label());
    Ok(search)
}
