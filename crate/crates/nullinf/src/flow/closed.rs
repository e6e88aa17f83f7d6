//! Explicit flows of the model Hamiltonian fields over null infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChartId;

/// `(rho, zeta, xi, eta)` over null infinity; `x` and `y` are constants of the flow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub rho: f64,
    pub zeta: f64,
    pub xi: f64,
    pub eta: Vec<f64>,
}

impl FlowState {
    pub fn new(rho: f64, zeta: f64, xi: f64, eta: Vec<f64>) -> Self {
        Self { rho, zeta, xi, eta }
    }

    pub fn eta_sq(&self) -> f64 {
        self.eta.iter().map(|v| v * v).sum()
    }
}

/// Model symbol over null infinity with flat sphere coefficients.
pub fn model_symbol(chart: ChartId, st: &FlowState) -> f64 {
    let q = st.xi * st.zeta - 0.5 * st.xi * st.xi;
    if chart.is_near_i0() {
        q + st.eta_sq()
    } else {
        -q + st.eta_sq()
    }
}

fn check_characteristic(chart: ChartId, st: &FlowState) -> Result<()> {
    let scale = st.zeta * st.zeta + st.xi * st.xi + st.eta_sq();
    if scale == 0.0 {
        return Err(Error::Domain("zero covector".into()));
    }
    let v = model_symbol(chart, st);
    if v.abs() > 1e-10 * scale {
        return Err(Error::Domain(format!("state is off the characteristic set (symbol {v:e})")));
    }
    if !(st.rho >= 0.0 && st.rho < 1.0) {
        return Err(Error::Domain(format!("rho = {} outside [0, 1)", st.rho)));
    }
    Ok(())
}

/// Time-`s` flow of the model Hamiltonian field over null infinity.
pub fn closed_form_flow(chart: ChartId, st: &FlowState, s: f64) -> Result<FlowState> {
    check_characteristic(chart, st)?;
    let (rho0, zeta, xi0) = (st.rho, st.zeta, st.xi);
    let out = if chart.is_near_i0() {
        if zeta == 0.0 {
            let d = 1.0 + s * xi0;
            if !(d > 0.0) {
                return Err(Error::Domain(format!("s = {s} outside the maximal interval (1 + s xi = {d})")));
            }
            FlowState { rho: rho0 * d, zeta, xi: xi0 / d, eta: st.eta.iter().map(|e| e / d).collect() }
        } else {
            let d = xi0 - (xi0 - 2.0 * zeta) * (-2.0 * zeta * s).exp();
            if !(zeta * d > 0.0) {
                return Err(Error::Domain(format!("s = {s} outside the maximal interval")));
            }
            let rho = rho0 * (1.0 + xi0 / (2.0 * zeta) * (2.0 * zeta * s).exp_m1());
            let fac = 2.0 * zeta * (-zeta * s).exp() / d;
            FlowState { rho, zeta, xi: 2.0 * xi0 * zeta / d, eta: st.eta.iter().map(|e| e * fac).collect() }
        }
    } else {
        if zeta == 0.0 {
            return Err(Error::Domain("zeta = 0 meets the characteristic set near timelike infinity only at the zero section".into()));
        }
        let d = xi0 + (2.0 * zeta - xi0) * (2.0 * zeta * s).exp();
        if !(zeta * d > 0.0) {
            return Err(Error::Domain(format!("s = {s} outside the maximal interval")));
        }
        let rho = rho0 * (1.0 + xi0 / (2.0 * zeta) * (-2.0 * zeta * s).exp_m1());
        let fac = 2.0 * zeta * (zeta * s).exp() / d;
        FlowState { rho, zeta, xi: 2.0 * xi0 * zeta / d, eta: st.eta.iter().map(|e| e * fac).collect() }
    };
    if !(out.rho >= 0.0 && out.rho < 1.0) {
        return Err(Error::Domain(format!("flow leaves the chart (rho = {})", out.rho)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const I0: ChartId = ChartId::NearI0 { t_shift: 0.0 };

    #[test]
    fn zeta_zero_branch_example() {
        let st = FlowState::new(0.1, 0.0, 2f64.sqrt(), vec![1.0]);
        let out = closed_form_flow(I0, &st, 0.5f64.sqrt()).unwrap();
        assert!((out.rho - 0.2).abs() < 1e-15);
        assert!((out.xi - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((out.eta[0] - 0.5).abs() < 1e-15);
        assert!(closed_form_flow(I0, &st, -1.0 / 2f64.sqrt()).is_err());
    }

    #[test]
    fn incoming_manifold_example() {
        let st = FlowState::new(0.1, 1.0, 2.0, vec![0.0]);
        let out = closed_form_flow(I0, &st, 2f64.ln() / 2.0).unwrap();
        assert!((out.rho - 0.2).abs() < 1e-15 && (out.xi - 2.0).abs() < 1e-15 && out.eta[0] == 0.0);
    }
}
