//! Numerical null-bicharacteristic flow on the compactified phase space.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::metric::dual_metric_raw;
use crate::geometry::{ChartId, ChartPoint, MetricSpec};
use crate::hamiltonian::field::rescaled_raw;
use crate::hamiltonian::phase::{HANDOFF_DOWN, HANDOFF_UP};
use crate::hamiltonian::{compact_from_state, compact_state, CompactPhasePoint, FiberChart};
use crate::numerics::ode::{integrate, DopriOptions, OdeSystem, StepControl};

use super::classify::{classify_point, Classification};

/// `rho` above which the base chart is exchanged.
pub const BASE_SWITCH_RHO: f64 = 0.8;
/// `rho` in the new chart right after an exchange.
pub const BASE_SWITCH_TARGET: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// Parametrization of the integrated field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeParam {
    /// `rho_inf H_p`, complete up to fiber infinity.
    Rescaled,
    /// `H_p` itself; requires finite fibers.
    Hamiltonian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct FlowParams {
    pub direction: Direction,
    pub time: TimeParam,
    /// Largest flow parameter.
    pub s_max: f64,
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    /// Stop once the trajectory has been classified.
    pub stop_on_classification: bool,
    /// Exchange charts at `rho = 0.8`; otherwise `rho` reaching 1 exits.
    pub chart_switching: bool,
    /// Project back onto the characteristic set after every step.
    pub project: bool,
    /// Keep every accepted step; otherwise only the endpoints.
    pub record: bool,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            direction: Direction::Forward,
            time: TimeParam::Rescaled,
            s_max: 200.0,
            rtol: 1e-9,
            atol: 1e-12,
            h_max: 0.5,
            stop_on_classification: true,
            chart_switching: true,
            project: true,
            record: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// Elapsed flow parameter in the direction of integration.
    pub s: f64,
    pub point: CompactPhasePoint,
    /// Euclidean norm of the rescaled field in state coordinates.
    pub speed: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FlowDiagnostics {
    /// Largest `|G_eb(c)| / |c|^2` seen before projection.
    pub max_symbol_drift: f64,
    pub base_chart_switches: usize,
    pub fiber_chart_switches: usize,
    pub sphere_chart_switches: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowResult {
    pub trajectory: Vec<TrajectoryPoint>,
    pub classification: Classification,
    pub diagnostics: FlowDiagnostics,
    /// The trajectory left the coordinate patch.
    pub exited: bool,
    pub s_max: f64,
}

impl FlowResult {
    pub fn last(&self) -> &TrajectoryPoint {
        self.trajectory.last().expect("trajectories are never empty")
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `|G(c)| / |c|^2` at the unit covector.
fn relative_symbol(m: &MetricSpec, c: &CompactPhasePoint) -> Result<f64> {
    let g = dual_metric_raw(m, &c.base)?;
    let w = DVector::from_vec(c.unit_covector());
    Ok((w.dot(&(&g * &w))) / w.norm_squared())
}

/// Newton projection of the hat coordinates onto the characteristic set.
fn project_to_characteristic(m: &MetricSpec, c: &mut CompactPhasePoint) -> Result<()> {
    let g = dual_metric_raw(m, &c.base)?;
    let s = c.fiber.sign().value();
    let lead_idx = match c.fiber {
        FiberChart::ZetaLarge(_) => 1,
        FiberChart::XiLarge(_) => 0,
    };
    for _ in 0..4 {
        let w = DVector::from_vec(c.unit_covector());
        let gw = &g * &w;
        let p = w.dot(&gw);
        let mut grad = vec![0.0; c.hat.len()];
        grad[0] = 2.0 * s * gw[lead_idx];
        for j in 1..c.hat.len() {
            grad[j] = 2.0 * s * gw[1 + j];
        }
        let gg: f64 = grad.iter().map(|v| v * v).sum();
        if gg == 0.0 || p.abs() <= 1e-15 * w.norm_squared() {
            break;
        }
        for (h, gr) in c.hat.iter_mut().zip(&grad) {
            *h -= p * gr / gg;
        }
    }
    Ok(())
}

/// Exchange `NearI0` and `NearIplus` at the current point.
fn switch_base_chart(c: &CompactPhasePoint) -> Result<CompactPhasePoint> {
    let old = c.base.chart;
    let so = old.orientation();
    let t_star = old.t_shift() - so / c.base.rho;
    let sn = -so;
    let new_chart = match old {
        ChartId::NearI0 { .. } => ChartId::NearIplus { t_shift: t_star + sn / BASE_SWITCH_TARGET },
        ChartId::NearIplus { .. } => ChartId::NearI0 { t_shift: t_star + sn / BASE_SWITCH_TARGET },
    };
    let q = c.base.rho / BASE_SWITCH_TARGET;
    let kappa = so / sn;
    let w = c.unit_covector();
    let mut wn = w.clone();
    wn[0] = kappa * q * w[0] + 0.5 * (1.0 - kappa * q) * w[1];
    for v in wn[2..].iter_mut() {
        *v *= q.sqrt();
    }
    let base = ChartPoint { chart: new_chart, rho: BASE_SWITCH_TARGET, x: c.base.x * q.sqrt(), y: c.base.y.clone() };
    CompactPhasePoint::from_covector(base, &wn, c.rho_inf)
}

/// Move the sphere coordinates to the other stereographic chart.
fn switch_sphere_chart(c: &CompactPhasePoint) -> Result<CompactPhasePoint> {
    let (y, jac) = c.base.y.switch_chart()?;
    let w = c.unit_covector();
    let eta = DVector::from_column_slice(&w[2..]);
    let jt_inv = jac
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::Domain("singular sphere transition".into()))?;
    let eta_new = jt_inv * eta;
    let mut wn = w[..2].to_vec();
    wn.extend(eta_new.iter());
    let base = ChartPoint { y, ..c.base.clone() };
    let mut out = CompactPhasePoint::from_covector(base, &wn, c.rho_inf)?;
    // keep the fiber chart when it is still valid
    if std::mem::discriminant(&out.fiber) != std::mem::discriminant(&c.fiber) {
        if let Ok(o) = out.switch_fiber_chart() {
            out = o;
        }
    }
    Ok(out)
}

struct FlowSystem<'a> {
    m: &'a MetricSpec,
    params: &'a FlowParams,
    current: CompactPhasePoint,
    on_characteristic: bool,
    trajectory: Vec<TrajectoryPoint>,
    last_point: Option<TrajectoryPoint>,
    diag: FlowDiagnostics,
    classification: Option<Classification>,
    exited: bool,
}

impl FlowSystem<'_> {
    fn velocity(&self, c: &CompactPhasePoint) -> Result<Vec<f64>> {
        let mut v = rescaled_raw(self.m, c)?;
        let mut scale = 1.0;
        if self.params.time == TimeParam::Hamiltonian {
            if !(c.rho_inf > 0.0) {
                return Err(Error::Step("Hamiltonian time at fiber infinity".into()));
            }
            scale /= c.rho_inf;
        }
        v.iter_mut().for_each(|x| *x *= scale);
        Ok(v)
    }

    fn push(&mut self, s: f64, point: CompactPhasePoint) -> Result<()> {
        let speed = norm(&rescaled_raw(self.m, &point)?);
        let tp = TrajectoryPoint { s, point, speed };
        if self.params.record || self.trajectory.is_empty() {
            self.trajectory.push(tp.clone());
        }
        self.last_point = Some(tp);
        Ok(())
    }
}

impl OdeSystem for FlowSystem<'_> {
    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let c = compact_from_state(&self.current, y);
        let v = self.velocity(&c)?;
        dy.copy_from_slice(&v);
        Ok(())
    }

    fn after_step(&mut self, t: f64, y: &mut Vec<f64>) -> Result<StepControl> {
        let mut c = compact_from_state(&self.current, y);
        if self.on_characteristic {
            let drift = relative_symbol(self.m, &c)?.abs();
            self.diag.max_symbol_drift = self.diag.max_symbol_drift.max(drift);
            if self.params.project {
                project_to_characteristic(self.m, &mut c)?;
            }
        }
        let lead_ratio = c.hat[0].abs();
        let wants_fiber_switch = match c.fiber {
            FiberChart::ZetaLarge(_) => lead_ratio > HANDOFF_UP,
            FiberChart::XiLarge(_) => lead_ratio > 1.0 / HANDOFF_DOWN,
        };
        if wants_fiber_switch {
            c = c.switch_fiber_chart()?;
            self.diag.fiber_chart_switches += 1;
        }
        if c.base.y.needs_handoff() {
            c = switch_sphere_chart(&c)?;
            self.diag.sphere_chart_switches += 1;
        }
        if c.base.rho > BASE_SWITCH_RHO && self.params.chart_switching && c.base.x * (c.base.rho / BASE_SWITCH_TARGET).sqrt() < 1.0 {
            c = switch_base_chart(&c)?;
            self.diag.base_chart_switches += 1;
        }
        let s = t.abs();
        if !(c.base.rho < 1.0 && c.base.x < 1.0) {
            self.exited = true;
            self.push(s, c.clone())?;
            self.current = c;
            return Ok(StepControl::Stop);
        }
        self.push(s, c.clone())?;
        let rebuilt = compact_state(&c);
        self.current = c;
        *y = rebuilt;
        if self.params.stop_on_classification && self.on_characteristic && self.params.time == TimeParam::Rescaled {
            let tp = self.last_point.as_ref().expect("just pushed");
            if let Some(cl) = classify_point(&tp.point, tp.speed) {
                self.classification = Some(cl);
                return Ok(StepControl::Stop);
            }
        }
        Ok(StepControl::Continue)
    }
}

/// Integrate the rescaled (or plain) Hamiltonian flow from `start`.
pub fn integrate_flow(m: &MetricSpec, start: &CompactPhasePoint, params: &FlowParams) -> Result<FlowResult> {
    m.validate()?;
    start.check_hats()?;
    if start.base.n() != m.n {
        return Err(Error::Invalid("dimension mismatch between point and metric".into()));
    }
    if !(start.base.rho >= 0.0 && start.base.rho < 1.0 && start.base.x >= 0.0 && start.base.x < 1.0) {
        return Err(Error::ChartExit(format!("start (rho = {}, x = {}) outside the chart", start.base.rho, start.base.x)));
    }
    if !(params.s_max > 0.0) {
        return Err(Error::Invalid("s_max must be positive".into()));
    }
    let speed0 = norm(&rescaled_raw(m, start)?);
    if speed0 < 1e-12 {
        return Err(Error::Precondition("start is a zero of the rescaled field".into()));
    }
    let on_characteristic = relative_symbol(m, start)?.abs() < 1e-8;
    let mut sys = FlowSystem {
        m,
        params,
        current: start.clone(),
        on_characteristic,
        trajectory: Vec::new(),
        last_point: None,
        diag: FlowDiagnostics::default(),
        classification: None,
        exited: false,
    };
    sys.push(0.0, start.clone())?;
    let opts = DopriOptions { rtol: params.rtol, atol: params.atol, h_max: params.h_max, ..Default::default() };
    let t_end = params.direction.sign() * params.s_max;
    let out = integrate(&mut sys, 0.0, compact_state(start), t_end, &opts)?;
    sys.diag.accepted_steps = out.accepted;
    sys.diag.rejected_steps = out.rejected;
    let last = sys.last_point.take().expect("start pushed");
    if !params.record && sys.trajectory.len() == 1 && last.s > 0.0 {
        sys.trajectory.push(last);
    }
    let mut res = FlowResult {
        trajectory: sys.trajectory,
        classification: Classification::Undetermined,
        diagnostics: sys.diag,
        exited: sys.exited,
        s_max: params.s_max,
    };
    res.classification = match sys.classification {
        Some(c) => c,
        None => super::classify::classify_asymptotics(&res),
    };
    Ok(res)
}
