//! Literal evaluation of the weight and order conditions of the propagation,
//! solvability and invertibility statements.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders, weights and constants entering the conditions. Backward tags read
/// the fields as the adjoint (tilde) quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(default)]
pub struct ThresholdInput {
    pub s: f64,
    pub s0: f64,
    pub alpha0: f64,
    pub alpha_i: f64,
    pub alpha_plus: f64,
    pub p1bar: f64,
    pub p1bar_plus: f64,
    pub n: usize,
    pub gamma_i: f64,
    pub im_lambda: f64,
}

impl Default for ThresholdInput {
    fn default() -> Self {
        Self { s: 1.0, s0: 0.5, alpha0: 0.0, alpha_i: 0.0, alpha_plus: 0.0, p1bar: 0.0, p1bar_plus: 0.0, n: 3, gamma_i: 0.0, im_lambda: 0.0 }
    }
}

impl ThresholdInput {
    /// Dual orders: `s -> 1 - s`, `alpha -> -alpha - (2, 2, 2)` with the
    /// null-infinity weight counted twice.
    pub fn dual(&self) -> Self {
        Self {
            s: 1.0 - self.s,
            s0: 1.0 - self.s0,
            alpha0: -self.alpha0 - 2.0,
            alpha_i: -self.alpha_i - 1.0,
            alpha_plus: -self.alpha_plus - 2.0,
            ..*self
        }
    }

    /// `n/2 - 1/2 + p1bar_plus`.
    pub fn q1bar_plus(&self) -> f64 {
        0.5 * (self.n as f64 - 1.0) + self.p1bar_plus
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremTag {
    /// Regularity and decay in the exterior domain.
    ThmExterior,
    /// Global regularity of forward solutions on Minkowski space.
    ThmGlobal,
    /// Forward propagation through null infinity.
    ThmPropFw,
    /// Forward propagation with full control at null infinity.
    ThmPropFwFull,
    /// Backward propagation through null infinity.
    ThmPropBw,
    /// Backward propagation with full control at null infinity.
    ThmPropBwFull,
    LemmaRcFw,
    LemmaRcBw,
    LemmaRinMinusFw,
    LemmaRinMinusBw,
    LemmaRinPlusFw,
    LemmaRinPlusBw,
    LemmaRoutFw,
    LemmaRoutBw,
    /// Invertibility of the edge normal operator, forward problem.
    PropNormalOpFw,
    /// Invertibility of the edge normal operator, backward problem.
    PropNormalOpBw,
    /// Bounded-frequency estimates for the Mellin-transformed operator.
    ThmPhat,
    ThmPhatAdjoint,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 18] = [
        TheoremTag::ThmExterior,
        TheoremTag::ThmGlobal,
        TheoremTag::ThmPropFw,
        TheoremTag::ThmPropFwFull,
        TheoremTag::ThmPropBw,
        TheoremTag::ThmPropBwFull,
        TheoremTag::LemmaRcFw,
        TheoremTag::LemmaRcBw,
        TheoremTag::LemmaRinMinusFw,
        TheoremTag::LemmaRinMinusBw,
        TheoremTag::LemmaRinPlusFw,
        TheoremTag::LemmaRinPlusBw,
        TheoremTag::LemmaRoutFw,
        TheoremTag::LemmaRoutBw,
        TheoremTag::PropNormalOpFw,
        TheoremTag::PropNormalOpBw,
        TheoremTag::ThmPhat,
        TheoremTag::ThmPhatAdjoint,
    ];
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .iter()
            .copied()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTheoremTag(s.to_string()))
    }
}

/// One strict inequality `lhs < rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub tag: TheoremTag,
    pub records: Vec<InequalityRecord>,
}

impl ThresholdReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&InequalityRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&InequalityRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

fn lt(name: &str, lhs: f64, rhs: f64) -> InequalityRecord {
    InequalityRecord { name: name.to_string(), lhs, rhs, pass: lhs < rhs }
}

pub fn threshold_evaluate(input: &ThresholdInput, tag: TheoremTag) -> ThresholdReport {
    let ThresholdInput { s, s0, alpha0: a0, alpha_i: ai, alpha_plus: ap, p1bar: p, .. } = *input;
    let fw_thru = || {
        vec![
            lt("alpha_+ < alpha_I - 1/2", ap, ai - 0.5),
            lt("alpha_I - 1/2 < alpha_0", ai - 0.5, a0),
            lt("s_0 < s", s0, s),
            lt("1/2 - alpha_0 + 2 alpha_I - p1 < s_0", 0.5 - a0 + 2.0 * ai - p, s0),
        ]
    };
    let bw_out = || {
        vec![
            lt("alpha_0 < alpha_I - 1/2", a0, ai - 0.5),
            lt("alpha_I - 1/2 < alpha_+", ai - 0.5, ap),
            lt("s < 1/2 - alpha_0 + 2 alpha_I + p1", s, 0.5 - a0 + 2.0 * ai + p),
        ]
    };
    let records = match tag {
        TheoremTag::ThmExterior => vec![lt("alpha_I < -1/2", ai, -0.5), lt("alpha_I < alpha_0 + 1/2", ai, a0 + 0.5)],
        TheoremTag::ThmGlobal => vec![
            lt("alpha_+ + 1/2 < alpha_I", ap + 0.5, ai),
            lt("alpha_I < -1/2", ai, -0.5),
            lt("alpha_I < alpha_0 + 1/2", ai, a0 + 0.5),
        ],
        TheoremTag::ThmPropFw => fw_thru(),
        TheoremTag::ThmPropFwFull => {
            let mut r = fw_thru();
            r.push(lt("alpha_I < -1/2 + p1", ai, -0.5 + p));
            r
        }
        TheoremTag::ThmPropBw => vec![lt("-1/2 - p1 < alpha_I", -0.5 - p, ai)],
        TheoremTag::ThmPropBwFull => {
            let mut r = vec![lt("-1/2 - p1 < alpha_I", -0.5 - p, ai)];
            r.extend(bw_out());
            r
        }
        TheoremTag::LemmaRcFw => vec![lt("s_0 < s", s0, s), lt("1/2 - alpha_0 + 2 alpha_I - p1 < s_0", 0.5 - a0 + 2.0 * ai - p, s0)],
        TheoremTag::LemmaRcBw => vec![lt("s < 1/2 - alpha_0 + 2 alpha_I + p1", s, 0.5 - a0 + 2.0 * ai + p)],
        TheoremTag::LemmaRinMinusFw => vec![lt("alpha_I < alpha_0 + 1/2", ai, a0 + 0.5)],
        TheoremTag::LemmaRinMinusBw => vec![lt("alpha_0 < alpha_I - 1/2", a0, ai - 0.5)],
        TheoremTag::LemmaRinPlusFw => vec![lt("alpha_+ < alpha_I - 1/2", ap, ai - 0.5)],
        TheoremTag::LemmaRinPlusBw => vec![lt("alpha_I < alpha_+ + 1/2", ai, ap + 0.5)],
        TheoremTag::LemmaRoutFw => vec![lt("alpha_I < -1/2 + p1", ai, -0.5 + p)],
        TheoremTag::LemmaRoutBw => vec![lt("-1/2 - p1 < alpha_I", -0.5 - p, ai)],
        TheoremTag::PropNormalOpFw => vec![lt("alpha_+ + 1/2 < alpha_I", ap + 0.5, ai), lt("alpha_I < -1/2 + p1", ai, -0.5 + p)],
        TheoremTag::PropNormalOpBw => vec![lt("-1/2 - p1 < alpha_I", -0.5 - p, ai), lt("alpha_I < alpha_+ + 1/2", ai, ap + 0.5)],
        TheoremTag::ThmPhat => {
            vec![lt("-Im lambda < gamma_I", -input.im_lambda, input.gamma_i), lt("gamma_I < q1_+", input.gamma_i, input.q1bar_plus())]
        }
        TheoremTag::ThmPhatAdjoint => {
            vec![lt("-q1_+ < gamma_I", -input.q1bar_plus(), input.gamma_i), lt("gamma_I < -Im lambda", input.gamma_i, -input.im_lambda)]
        }
    };
    ThresholdReport { tag, records }
}

/// Evaluate by tag name.
pub fn threshold_evaluate_named(input: &ThresholdInput, tag: &str) -> Result<ThresholdReport> {
    Ok(threshold_evaluate(input, tag.parse()?))
}
