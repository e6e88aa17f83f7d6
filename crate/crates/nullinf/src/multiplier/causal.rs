//! Causal character of edge-b vectors for the rescaled metric.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::metric::covariant_metric_raw;
use crate::geometry::{ChartPoint, MetricSpec};

/// Relative tolerance for null vectors.
pub const NULL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalCharacter {
    FutureTimelike,
    FutureNull,
    PastNull,
    Spacelike,
    PastTimelike,
}

impl CausalCharacter {
    pub fn is_future_causal(self) -> bool {
        matches!(self, CausalCharacter::FutureTimelike | CausalCharacter::FutureNull)
    }
}

/// The declared future causal vectors `(rho d_rho - x d_x / 2, -x d_x)` near
/// spatial infinity, `(-rho d_rho + x d_x / 2, -x d_x)` near timelike infinity,
/// in frame components.
pub fn future_generators(c: &ChartPoint) -> [Vec<f64>; 2] {
    let n = c.n();
    let s = c.chart.orientation();
    let mut t1 = vec![0.0; n + 1];
    t1[0] = s;
    t1[1] = -0.5 * s;
    let mut t2 = vec![0.0; n + 1];
    t2[1] = -1.0;
    [t1, t2]
}

/// `g_eb(v, w)` for frame components.
pub fn pairing(m: &MetricSpec, c: &ChartPoint, v: &[f64], w: &[f64]) -> Result<f64> {
    let g = covariant_metric_raw(m, c)?;
    if v.len() != g.nrows() || w.len() != g.nrows() {
        return Err(Error::Invalid(format!("frame vectors need {} components", g.nrows())));
    }
    let v = DVector::from_column_slice(v);
    let w = DVector::from_column_slice(w);
    Ok(v.dot(&(&g * &w)))
}

/// Sign of `g_eb(v, v)` and time orientation relative to the declared
/// future causal generators.
pub fn causal_character(m: &MetricSpec, v: &[f64], c: &ChartPoint) -> Result<CausalCharacter> {
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(Error::Domain("zero vector has no causal character".into()));
    }
    let q = pairing(m, c, v, v)?;
    let [t1, t2] = future_generators(c);
    let t: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| a + b).collect();
    let orient = pairing(m, c, v, &t)?;
    Ok(if q.abs() <= NULL_TOL * norm2 {
        if orient < 0.0 {
            CausalCharacter::FutureNull
        } else {
            CausalCharacter::PastNull
        }
    } else if q > 0.0 {
        CausalCharacter::Spacelike
    } else if orient < 0.0 {
        CausalCharacter::FutureTimelike
    } else {
        CausalCharacter::PastTimelike
    })
}
