//! C interface to `nullinf`.
//!
//! Every entry point returns a [`NullinfStatus`]; outputs go through pointer
//! arguments. On failure the message is kept per thread and read with
//! [`nullinf_last_error`]. Handles are opaque and released with their `_free`
//! function. Panics are caught at the boundary and reported as
//! `NULLINF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nullinf::cli::{self, ExperimentConfig, ResultSet};
use nullinf::geometry::chart::{from_chart, to_chart, ChartId, ChartPoint, SpacetimePoint};
use nullinf::geometry::sphere::SpherePoint;
use nullinf::multiplier::thresholds::{threshold_evaluate_named, ThresholdInput};
use nullinf::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullinfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Domain = 4,
    ThresholdViolation = 5,
    Numerical = 6,
    Io = 7,
    NotFound = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullinfChart {
    NearI0 = 0,
    NearIplus = 1,
}

/// Orders and weights for threshold checks; same meaning as the `[weights]`
/// config section.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullinfWeights {
    pub s: f64,
    pub s0: f64,
    pub alpha0: f64,
    pub alpha_i: f64,
    pub alpha_plus: f64,
    pub p1bar: f64,
    pub p1bar_plus: f64,
    pub n: u32,
    pub gamma_i: f64,
    pub im_lambda: f64,
}

/// Parsed and validated experiment configuration.
pub struct NullinfConfig {
    inner: ExperimentConfig,
}

/// Tables and summary values of one experiment run.
pub struct NullinfResults {
    inner: ResultSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NullinfStatus {
    match e {
        Error::Config { .. } | Error::UnknownTheoremTag(_) => NullinfStatus::Config,
        Error::ThresholdViolation(_) => NullinfStatus::ThresholdViolation,
        Error::Domain(_) => NullinfStatus::Domain,
        Error::Invalid(_) | Error::Precondition(_) | Error::Parse(_) => NullinfStatus::InvalidArgument,
        Error::Io(_) => NullinfStatus::Io,
        _ => NullinfStatus::Numerical,
    }
}

struct Fail(NullinfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Run `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NullinfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NullinfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {msg}"));
            NullinfStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(NullinfStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    non_null(p, name)?;
    CStr::from_ptr(p).to_str().map_err(|_| Fail(NullinfStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

fn chart_id(chart: NullinfChart, t_shift: f64) -> ChartId {
    match chart {
        NullinfChart::NearI0 => ChartId::NearI0 { t_shift },
        NullinfChart::NearIplus => ChartId::NearIplus { t_shift },
    }
}

/// Message of the last failure on this thread, or null if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nullinf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nullinf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a TOML experiment configuration. `origin` labels error locations and
/// may be null.
///
/// # Safety
/// `text` and `origin` are null or NUL-terminated; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_config_parse(
    text: *const c_char,
    origin: *const c_char,
    out: *mut *mut NullinfConfig,
) -> NullinfStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let text = read_str(text, "text")?;
        let origin = if origin.is_null() { "<config>" } else { read_str(origin, "origin")? };
        let inner = ExperimentConfig::parse(text, origin)?;
        *out = Box::into_raw(Box::new(NullinfConfig { inner }));
        Ok(())
    })
}

/// Override the random seed of a parsed configuration.
///
/// # Safety
/// `config` is null or a live handle from [`nullinf_config_parse`].
#[no_mangle]
pub unsafe extern "C" fn nullinf_config_set_seed(config: *mut NullinfConfig, seed: u64) -> NullinfStatus {
    guard(|| {
        non_null(config, "config")?;
        (*config).inner.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `config` is null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nullinf_config_free(config: *mut NullinfConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Run the experiment named by the configuration's `kind`.
///
/// # Safety
/// `config` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_run(config: *const NullinfConfig, out: *mut *mut NullinfResults) -> NullinfStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        non_null(config, "config")?;
        let cfg = &(*config).inner;
        let kind = cfg.resolve_kind(None)?;
        let inner = cli::run(cfg, kind)?;
        *out = Box::into_raw(Box::new(NullinfResults { inner }));
        Ok(())
    })
}

/// # Safety
/// `results` is null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nullinf_results_free(results: *mut NullinfResults) {
    if !results.is_null() {
        drop(Box::from_raw(results));
    }
}

/// Numeric summary value `key`; booleans read as 0 or 1.
///
/// # Safety
/// `results` is null or a live handle; `key` is null or NUL-terminated;
/// `value` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_results_summary(
    results: *const NullinfResults,
    key: *const c_char,
    value: *mut f64,
) -> NullinfStatus {
    guard(|| {
        non_null(results, "results")?;
        non_null(value, "value")?;
        let key = read_str(key, "key")?;
        let cell = (*results)
            .inner
            .get(key)
            .ok_or_else(|| Fail(NullinfStatus::NotFound, format!("no summary key `{key}`")))?;
        *value = cell
            .as_f64()
            .or_else(|| cell.as_bool().map(|b| b as u8 as f64))
            .ok_or_else(|| Fail(NullinfStatus::InvalidArgument, format!("summary `{key}` is not numeric")))?;
        Ok(())
    })
}

/// Number of rows of table `table`.
///
/// # Safety
/// Pointers are null or valid as for [`nullinf_results_summary`].
#[no_mangle]
pub unsafe extern "C" fn nullinf_results_rows(
    results: *const NullinfResults,
    table: *const c_char,
    rows: *mut usize,
) -> NullinfStatus {
    guard(|| {
        non_null(results, "results")?;
        non_null(rows, "rows")?;
        let name = read_str(table, "table")?;
        let t = (*results).inner.table(name).map_err(|e| Fail(NullinfStatus::NotFound, e.to_string()))?;
        *rows = t.len();
        Ok(())
    })
}

/// Copy a numeric column into `buf`. `len` receives the row count; when it
/// exceeds `capacity` nothing is copied and `NULLINF_STATUS_INVALID_ARGUMENT`
/// is returned. Non-numeric cells are copied as NaN.
///
/// # Safety
/// `buf` is null (with `capacity` 0) or has room for `capacity` doubles;
/// other pointers as for [`nullinf_results_summary`].
#[no_mangle]
pub unsafe extern "C" fn nullinf_results_column(
    results: *const NullinfResults,
    table: *const c_char,
    column: *const c_char,
    buf: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> NullinfStatus {
    guard(|| {
        non_null(results, "results")?;
        non_null(len, "len")?;
        let name = read_str(table, "table")?;
        let col = read_str(column, "column")?;
        let t = (*results).inner.table(name).map_err(|e| Fail(NullinfStatus::NotFound, e.to_string()))?;
        let cells = t.column(col).map_err(|e| Fail(NullinfStatus::NotFound, e.to_string()))?;
        *len = cells.len();
        if cells.len() > capacity {
            return Err(Fail(
                NullinfStatus::InvalidArgument,
                format!("column `{col}` has {} rows, buffer holds {capacity}", cells.len()),
            ));
        }
        if !cells.is_empty() {
            non_null(buf, "buf")?;
            let out = std::slice::from_raw_parts_mut(buf, cells.len());
            for (o, c) in out.iter_mut().zip(cells) {
                *o = c.as_f64().unwrap_or(f64::NAN);
            }
        }
        Ok(())
    })
}

/// The full result set as JSON; release with [`nullinf_string_free`].
///
/// # Safety
/// `results` is null or a live handle; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_results_to_json(results: *const NullinfResults, out: *mut *mut c_char) -> NullinfStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        non_null(results, "results")?;
        let text = cli::to_json_string(&(*results).inner)?;
        *out = CString::new(text).map_err(|e| Fail(NullinfStatus::Io, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nullinf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Chart coordinates `(rho, x)` of the point at time `t` and radius `r`.
///
/// # Safety
/// `rho` and `x` are null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_to_chart(
    chart: NullinfChart,
    t_shift: f64,
    t: f64,
    r: f64,
    rho: *mut f64,
    x: *mut f64,
) -> NullinfStatus {
    guard(|| {
        non_null(rho, "rho")?;
        non_null(x, "x")?;
        let p = SpacetimePoint { t, r, omega: vec![0.0, 0.0, 1.0] };
        let c = to_chart(&p, chart_id(chart, t_shift))?;
        *rho = c.rho;
        *x = c.x;
        Ok(())
    })
}

/// Time `t` and radius `r` of the interior chart point `(rho, x)`.
///
/// # Safety
/// `t` and `r` are null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_from_chart(
    chart: NullinfChart,
    t_shift: f64,
    rho: f64,
    x: f64,
    t: *mut f64,
    r: *mut f64,
) -> NullinfStatus {
    guard(|| {
        non_null(t, "t")?;
        non_null(r, "r")?;
        let c = ChartPoint::new(chart_id(chart, t_shift), rho, x, SpherePoint::north_pole(2));
        let p = from_chart(&c)?;
        *t = p.t;
        *r = p.r;
        Ok(())
    })
}

/// Default weights (`s = 1`, `s0 = 1/2`, `n = 3`, all others 0).
#[no_mangle]
pub extern "C" fn nullinf_weights_default() -> NullinfWeights {
    let d = ThresholdInput::default();
    NullinfWeights {
        s: d.s,
        s0: d.s0,
        alpha0: d.alpha0,
        alpha_i: d.alpha_i,
        alpha_plus: d.alpha_plus,
        p1bar: d.p1bar,
        p1bar_plus: d.p1bar_plus,
        n: d.n as u32,
        gamma_i: d.gamma_i,
        im_lambda: d.im_lambda,
    }
}

/// Evaluate the conditions of theorem `tag`. `pass` is set to whether all hold;
/// `failed` (optional) receives the number of failing conditions. A failing
/// check is not an error; the failing names are available from
/// [`nullinf_last_error`] only when `pass` is false.
///
/// # Safety
/// `tag` is null or NUL-terminated; `weights` is null or readable; `pass` is
/// null or writable; `failed` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn nullinf_threshold_check(
    tag: *const c_char,
    weights: *const NullinfWeights,
    pass: *mut bool,
    failed: *mut usize,
) -> NullinfStatus {
    guard(|| {
        non_null(weights, "weights")?;
        non_null(pass, "pass")?;
        let tag = read_str(tag, "tag")?;
        let w = &*weights;
        let input = ThresholdInput {
            s: w.s,
            s0: w.s0,
            alpha0: w.alpha0,
            alpha_i: w.alpha_i,
            alpha_plus: w.alpha_plus,
            p1bar: w.p1bar,
            p1bar_plus: w.p1bar_plus,
            n: w.n as usize,
            gamma_i: w.gamma_i,
            im_lambda: w.im_lambda,
        };
        let report = threshold_evaluate_named(&input, tag)?;
        *pass = report.all_pass();
        if !failed.is_null() {
            *failed = report.failures().len();
        }
        if !report.all_pass() {
            let names: Vec<&str> = report.failures().iter().map(|r| r.name.as_str()).collect();
            set_last_error(&format!("{tag} requires {}", names.join(", ")));
        }
        Ok(())
    })
}
