//! Experiment configuration: a sectioned TOML file.
//!
//! ```toml
//! kind = "flow"
//! seed = 7
//!
//! [metric]
//! name = "minkowski"
//! n = 2
//!
//! [flow]
//! mode = "trace"
//! rho0 = 0.1
//! zeta_over_xi = 0.25
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::emit::Format;
use crate::error::{Error, Result};
use crate::flow::{FlowParams, PortraitSpec};
use crate::geometry::{ChartId, MetricSpec};
use crate::multiplier::{Side, ThresholdInput, WeightName};
use crate::normop::ReducedGrid;
use crate::wavesolver::{DecayCurve, Family, FitWindow, ForcingSpec, GridSpec, Region, WaveOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Chart,
    Flow,
    Portrait,
    Thresholds,
    Multiplier,
    Solve,
    Normop,
    Mellin,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Chart => "chart",
            ExperimentKind::Flow => "flow",
            ExperimentKind::Portrait => "portrait",
            ExperimentKind::Thresholds => "thresholds",
            ExperimentKind::Multiplier => "multiplier",
            ExperimentKind::Solve => "solve",
            ExperimentKind::Normop => "normop",
            ExperimentKind::Mellin => "mellin",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    #[default]
    Minkowski,
    Schwarzschild,
    ModelP1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSection {
    pub name: MetricName,
    pub n: usize,
    pub p1: f64,
    pub mass: f64,
}

impl Default for MetricSection {
    fn default() -> Self {
        Self { name: MetricName::Minkowski, n: 3, p1: 0.0, mass: 0.0 }
    }
}

impl MetricSection {
    pub fn spec(&self) -> MetricSpec {
        match self.name {
            MetricName::Minkowski => MetricSpec::minkowski(self.n),
            MetricName::Schwarzschild => MetricSpec::schwarzschild(self.n, self.mass),
            MetricName::ModelP1 => MetricSpec::model(self.n, self.p1),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartName {
    #[default]
    NearI0,
    NearIplus,
}

impl ChartName {
    pub fn id(self, t_shift: f64) -> ChartId {
        match self {
            ChartName::NearI0 => ChartId::NearI0 { t_shift },
            ChartName::NearIplus => ChartId::NearIplus { t_shift },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
    /// File name stem; the experiment kind when absent.
    pub stem: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChartSection {
    pub chart: ChartName,
    pub t_shift: f64,
    pub rho: Vec<f64>,
    pub x: Vec<f64>,
}

impl Default for ChartSection {
    fn default() -> Self {
        Self { chart: ChartName::NearI0, t_shift: 0.0, rho: vec![0.1, 0.3, 0.5, 0.7, 0.9], x: vec![0.1, 0.3, 0.5, 0.7, 0.9] }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMode {
    /// One trajectory from a start on the characteristic set at fiber infinity.
    #[default]
    Trace,
    /// Integrated against explicit flows from random finite starts.
    Oracle,
    /// Radial-set search and linearization in both charts.
    Radial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSection {
    pub mode: FlowMode,
    pub rho0: f64,
    pub zeta_over_xi: f64,
    /// Unit direction of `eta` with `n - 1` components; the first axis when empty.
    pub eta_dir: Vec<f64>,
    pub params: FlowParams,
    /// Number of random starts in oracle mode.
    pub samples: usize,
    /// Oracle flow times are drawn from `(-max_time, max_time)`.
    pub max_time: f64,
}

impl Default for FlowSection {
    fn default() -> Self {
        Self {
            mode: FlowMode::Trace,
            rho0: 0.1,
            zeta_over_xi: 0.25,
            eta_dir: Vec::new(),
            params: FlowParams::default(),
            samples: 200,
            max_time: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdSection {
    /// Theorem tags; all tags when empty.
    pub tags: Vec<String>,
    /// Also evaluate the dual orders.
    pub dual: bool,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self { tags: Vec::new(), dual: true }
    }
}

/// Bisection for the edge of the definite region in one weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundarySearch {
    pub chart: ChartName,
    pub which: WeightName,
    /// `(alpha0, alpha_I, alpha_+)`; `which` is varied.
    pub base: [f64; 3],
    pub bracket: [f64; 2],
    pub side: Side,
    pub c_max: f64,
    pub tol: f64,
}

impl Default for BoundarySearch {
    fn default() -> Self {
        Self {
            chart: ChartName::NearI0,
            which: WeightName::AlphaI,
            base: [3.0, 0.0, 0.0],
            bracket: [-3.0, 1.0],
            side: Side::Forward,
            c_max: 1e-4,
            tol: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiplierSection {
    pub chart: ChartName,
    pub side: Side,
    /// `c` values of the scan; log-spaced on `[1e-8, 1.9]` when empty.
    pub c_grid: Vec<f64>,
    /// Richardson pair `(c, c/2)` for the trace and determinant slope.
    pub slope_c: f64,
    pub boundary: Vec<BoundarySearch>,
}

impl Default for MultiplierSection {
    fn default() -> Self {
        Self { chart: ChartName::NearI0, side: Side::Forward, c_grid: Vec::new(), slope_c: 0.01, boundary: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayRequest {
    pub curve: DecayCurve,
    #[serde(default)]
    pub window: FitWindow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveCase {
    pub label: String,
    #[serde(default = "minkowski_operator")]
    pub operator: WaveOperator,
    pub forcing: Vec<ForcingSpec>,
    /// Overrides the section grid.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub decay: Vec<DecayRequest>,
}

fn minkowski_operator() -> WaveOperator {
    WaveOperator::Minkowski
}

/// Weighted norms with the weights of `[weights]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormRequest {
    pub region: Region,
    pub family: Family,
    /// Extra b-derivatives, one norm per entry.
    pub k: Vec<usize>,
    pub levels: usize,
}

impl Default for NormRequest {
    fn default() -> Self {
        Self { region: Region::Exterior, family: Family::EdgeB, k: vec![0], levels: 14 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpnessRequest {
    /// `alpha_I` values; -0.9 to -0.1 in steps of 0.05 when empty.
    pub alpha_grid: Vec<f64>,
    pub levels: usize,
}

impl Default for SharpnessRequest {
    fn default() -> Self {
        Self { alpha_grid: Vec::new(), levels: 14 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSection {
    /// Theorem tag whose conditions on `[weights]` must hold before solving.
    pub gate: Option<String>,
    pub grid: GridSpec,
    pub case: Vec<SolveCase>,
    pub norm: Option<NormRequest>,
    pub sharpness: Option<SharpnessRequest>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NormopMode {
    /// Boundary spectrum and shooting fits of the exponents.
    #[default]
    Spectrum,
    /// Smallest singular values, degeneration and manufactured solutions.
    Solve,
    /// Mellin round trip and Plancherel identity.
    MellinCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormopSection {
    pub mode: NormopMode,
    /// Added to `(n - 1)/2` to give `q1`.
    pub p1_plus: f64,
    pub p0: f64,
    /// Spectral parameters `[re, im]`.
    pub lambdas: Vec<[f64; 2]>,
    /// Weights `gamma_I`; five interior points of each window when empty.
    pub gammas: Vec<f64>,
    pub grid: ReducedGrid,
    /// Distances from the window ends for the degeneration table.
    pub end_offsets: Vec<f64>,
    /// Exponents `a` of the manufactured solutions `x^a exp(-x^2)`.
    pub manufactured: Vec<f64>,
    pub shoot_x_start: f64,
    pub shoot_window: [f64; 2],
    pub shoot_samples: usize,
}

impl Default for NormopSection {
    fn default() -> Self {
        Self {
            mode: NormopMode::Spectrum,
            p1_plus: 0.0,
            p0: 0.0,
            lambdas: vec![[0.3, -0.2]],
            gammas: Vec::new(),
            grid: ReducedGrid::default(),
            end_offsets: vec![0.2, 0.1, 0.03, 0.01, 0.0],
            manufactured: vec![4.0],
            shoot_x_start: 1e-4,
            shoot_window: [1e-4, 1e-2],
            shoot_samples: 41,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MellinSection {
    pub gamma_plus: Vec<f64>,
    /// Random test functions per weight.
    pub functions: usize,
    /// Grid points; even.
    pub len: usize,
    /// The grid covers `log rho` in `[-log_span, log_span]`.
    pub log_span: f64,
}

impl Default for MellinSection {
    fn default() -> Self {
        Self { gamma_plus: vec![-1.0, 0.0, 1.0], functions: 20, len: 512, log_span: 20.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Required for `run`; subcommands supply it otherwise.
    #[serde(default)]
    pub kind: Option<ExperimentKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub metric: MetricSection,
    /// Orders and weights for threshold predicates, multipliers and norms.
    #[serde(default)]
    pub weights: ThresholdInput,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub chart: ChartSection,
    #[serde(default)]
    pub flow: FlowSection,
    #[serde(default)]
    pub portrait: PortraitSpec,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default)]
    pub multiplier: MultiplierSection,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub normop: NormopSection,
    #[serde(default)]
    pub mellin: MellinSection,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |k| k + 1) + 1;
    (line, col)
}

fn check(ok: bool, field: &str, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(field, message()))
    }
}

impl ExperimentConfig {
    /// Parse and validate; `origin` names the source in error locations.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let (line, col) = line_col(text, span.start);
                    format!("{origin}:{line}:{col}")
                }
                None => origin.to_string(),
            };
            Error::config(location, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Kind from the file, or `requested` when the file leaves it open.
    pub fn resolve_kind(&self, requested: Option<ExperimentKind>) -> Result<ExperimentKind> {
        match (self.kind, requested) {
            (Some(a), Some(b)) if a != b => {
                Err(Error::config("kind", format!("config declares `{}` but `{}` was requested", a.name(), b.name())))
            }
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Err(Error::config("kind", "missing experiment kind")),
        }
    }

    /// Checks beyond the file syntax, reported with the field path.
    pub fn validate(&self) -> Result<()> {
        let m = &self.metric;
        check(m.n >= 2, "metric.n", || format!("space dimension {} < 2", m.n))?;
        check(m.p1.is_finite(), "metric.p1", || "must be finite".into())?;
        check(m.mass.is_finite() && m.mass >= 0.0, "metric.mass", || format!("{} must be >= 0", m.mass))?;

        let c = &self.chart;
        check(!c.rho.is_empty() && !c.x.is_empty(), "chart", || "rho and x grids must be non-empty".into())?;
        check(c.rho.iter().chain(&c.x).all(|v| *v > 0.0 && *v < 1.0), "chart", || "grid values must lie in (0, 1)".into())?;

        let f = &self.flow;
        check(f.eta_dir.is_empty() || f.eta_dir.len() == m.n - 1, "flow.eta_dir", || {
            format!("needs {} components, got {}", m.n - 1, f.eta_dir.len())
        })?;
        check(f.eta_dir.is_empty() || (f.eta_dir.iter().map(|e| e * e).sum::<f64>() - 1.0).abs() < 1e-9, "flow.eta_dir", || {
            "must be a unit vector".into()
        })?;
        check(f.zeta_over_xi <= 0.5, "flow.zeta_over_xi", || format!("{} > 1/2 is not characteristic", f.zeta_over_xi))?;
        check((0.0..1.0).contains(&f.rho0), "flow.rho0", || format!("{} outside [0, 1)", f.rho0))?;
        check(f.samples > 0, "flow.samples", || "must be positive".into())?;
        check(f.max_time > 0.0 && f.max_time.is_finite(), "flow.max_time", || "must be positive".into())?;
        check(f.params.s_max > 0.0, "flow.params.s_max", || "must be positive".into())?;

        for (k, t) in self.thresholds.tags.iter().enumerate() {
            t.parse::<crate::multiplier::TheoremTag>().map_err(|e| Error::config(format!("thresholds.tags[{k}]"), e.to_string()))?;
        }
        if let Some(g) = &self.solve.gate {
            g.parse::<crate::multiplier::TheoremTag>().map_err(|e| Error::config("solve.gate", e.to_string()))?;
        }

        let mu = &self.multiplier;
        check(mu.slope_c > 0.0 && mu.slope_c < 2.0, "multiplier.slope_c", || format!("{} outside (0, 2)", mu.slope_c))?;
        check(mu.c_grid.iter().all(|c| *c > 0.0 && *c < 2.0), "multiplier.c_grid", || "values must lie in (0, 2)".into())?;
        for (k, b) in mu.boundary.iter().enumerate() {
            check(b.bracket[0] < b.bracket[1], &format!("multiplier.boundary[{k}].bracket"), || "must be increasing".into())?;
            check(b.tol > 0.0, &format!("multiplier.boundary[{k}].tol"), || "must be positive".into())?;
        }

        let s = &self.solve;
        for (k, case) in s.case.iter().enumerate() {
            check(!case.forcing.is_empty(), &format!("solve.case[{k}].forcing"), || "at least one forcing term".into())?;
        }
        if s.norm.is_some() || s.sharpness.is_some() {
            let order = self.weights.s;
            check(order >= 0.0 && order.fract() == 0.0, "weights.s", || format!("norms need a whole order, got {order}"))?;
        }

        let no = &self.normop;
        check(!no.lambdas.is_empty(), "normop.lambdas", || "at least one spectral parameter".into())?;
        check(no.grid.degree >= 8, "normop.grid.degree", || "must be at least 8".into())?;
        check(no.grid.x_min > 0.0 && no.grid.x_min < no.grid.x_max, "normop.grid", || "need 0 < x_min < x_max".into())?;
        check(no.shoot_samples >= 3, "normop.shoot_samples", || "must be at least 3".into())?;

        let me = &self.mellin;
        check(me.len >= 8 && me.len.is_multiple_of(2), "mellin.len", || format!("{} must be even and at least 8", me.len))?;
        check(me.log_span > 0.0, "mellin.log_span", || "must be positive".into())?;
        Ok(())
    }

    pub fn threshold_input(&self) -> ThresholdInput {
        ThresholdInput { n: self.metric.n, ..self.weights }
    }
}
