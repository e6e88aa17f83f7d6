//! Embedded Dormand–Prince 5(4) integrator with a post-step hook.

use crate::error::{Error, Result};

/// Whether integration continues after an accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepControl {
    Continue,
    Stop,
}

/// A first-order system `y' = f(t, y)` whose state may be edited between
/// steps (projection, chart changes).
pub trait OdeSystem {
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()>;

    /// Called after every accepted step. The state may be replaced.
    fn after_step(&mut self, _t: f64, _y: &mut Vec<f64>) -> Result<StepControl> {
        Ok(StepControl::Continue)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DopriOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step magnitude.
    pub h_init: f64,
    /// Step magnitude below which the integration fails.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for DopriOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, h_init: 1e-3, h_min: 1e-14, h_max: 0.5, max_steps: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeOutcome {
    pub t: f64,
    pub y: Vec<f64>,
    pub accepted: usize,
    pub rejected: usize,
    /// True when `after_step` requested the stop before `t_end`.
    pub stopped_early: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Stages 2..7 of one step from `(t, y)`; the 5th-order result goes to `y5`.
fn trial_step<S: OdeSystem>(
    sys: &S,
    t: f64,
    y: &[f64],
    hs: f64,
    k: &mut [Vec<f64>],
    tmp: &mut [f64],
    y5: &mut [f64],
) -> Result<()> {
    let dim = y.len();
    let stages: [(f64, &[f64]); 5] = [
        (C2, &[A21]),
        (C3, &[A31, A32]),
        (C4, &[A41, A42, A43]),
        (C5, &[A51, A52, A53, A54]),
        (1.0, &[A61, A62, A63, A64, A65]),
    ];
    for (s, (c, a)) in stages.iter().enumerate() {
        for i in 0..dim {
            let mut acc = y[i];
            for (j, aj) in a.iter().enumerate() {
                acc += hs * aj * k[j][i];
            }
            tmp[i] = acc;
        }
        let (_, tail) = k.split_at_mut(s + 1);
        sys.rhs(t + c * hs, tmp, &mut tail[0])?;
    }
    for i in 0..dim {
        y5[i] = y[i] + hs * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
    }
    let (_, tail) = k.split_at_mut(6);
    sys.rhs(t + hs, y5, &mut tail[0])
}

/// Integrate from `t0` to `t_end` (either direction). A failed right-hand
/// side evaluation inside a step is treated as a rejection.
pub fn integrate<S: OdeSystem>(
    sys: &mut S,
    t0: f64,
    y0: Vec<f64>,
    t_end: f64,
    opts: &DopriOptions,
) -> Result<OdeOutcome> {
    let dim = y0.len();
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(opts.h_max).min((t_end - t0).abs().max(f64::MIN_POSITIVE));
    let mut k = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    let (mut accepted, mut rejected) = (0usize, 0usize);
    sys.rhs(t, &y, &mut k[0])?;
    while (t_end - t) * dir > 0.0 {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::StepFailure(format!("step budget exhausted at t = {t}")));
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = h * dir;
        if let Err(e) = trial_step(sys, t, &y, hs, &mut k, &mut tmp, &mut y5) {
            rejected += 1;
            h *= 0.25;
            if h < opts.h_min {
                return Err(e);
            }
            continue;
        }
        let (head, tail) = k.split_at(6);
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let e = hs
                * (E1 * head[0][i] + E3 * head[2][i] + E4 * head[3][i] + E5 * head[4][i] + E6 * head[5][i]
                    + E7 * tail[0][i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            rejected += 1;
            h *= 0.25;
            if h < opts.h_min {
                return Err(Error::StepFailure(format!("non-finite step at t = {t}")));
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { t_end } else { t + hs };
            std::mem::swap(&mut y, &mut y5);
            accepted += 1;
            let ctrl = sys.after_step(t, &mut y)?;
            sys.rhs(t, &y, &mut k[0])?;
            if ctrl == StepControl::Stop {
                return Ok(OdeOutcome { t, y, accepted, rejected, stopped_early: (t_end - t) * dir > 0.0 });
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(opts.h_max);
        } else {
            rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < opts.h_min {
                return Err(Error::StepFailure(format!("step underflow at t = {t}")));
            }
        }
    }
    Ok(OdeOutcome { t, y, accepted, rejected, stopped_early: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Osc;
    impl OdeSystem for Osc {
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        }
    }

    #[test]
    fn harmonic_oscillator_both_directions() {
        let opts = DopriOptions { rtol: 1e-11, atol: 1e-13, ..Default::default() };
        let out = integrate(&mut Osc, 0.0, vec![1.0, 0.0], 10.0, &opts).unwrap();
        assert!((out.y[0] - 10f64.cos()).abs() < 1e-8);
        let back = integrate(&mut Osc, 10.0, out.y, 0.0, &opts).unwrap();
        assert!((back.y[0] - 1.0).abs() < 1e-8 && back.y[1].abs() < 1e-8);
    }
}
