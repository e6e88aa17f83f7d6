use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use nullinf_ffi::*;

fn last_error() -> String {
    let p = nullinf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> (NullinfStatus, *mut NullinfConfig) {
    let text = CString::new(text).unwrap();
    let mut cfg = ptr::null_mut();
    let st = unsafe { nullinf_config_parse(text.as_ptr(), c"test.toml".as_ptr(), &mut cfg) };
    (st, cfg)
}

#[test]
fn chart_maps_round_trip() {
    let (mut rho, mut x, mut t, mut r) = (0.0, 0.0, 0.0, 0.0);
    for (chart, shift, t0, r0) in [(NullinfChart::NearI0, 1.0, 3.0, 4.0), (NullinfChart::NearIplus, -2.0, 30.0, 25.0)] {
        assert_eq!(unsafe { nullinf_to_chart(chart, shift, t0, r0, &mut rho, &mut x) }, NullinfStatus::Ok);
        assert_eq!(unsafe { nullinf_from_chart(chart, shift, rho, x, &mut t, &mut r) }, NullinfStatus::Ok);
        assert!((t - t0).abs() < 1e-12 && (r - r0).abs() < 1e-12);
    }
    // t* = t - r = -1 with T = 1: rho0 = 1/2, x = sqrt(2/4)
    unsafe { nullinf_to_chart(NullinfChart::NearI0, 1.0, 3.0, 4.0, &mut rho, &mut x) };
    assert_eq!((rho, x), (0.5, 0.5f64.sqrt()));
    assert_eq!(unsafe { nullinf_to_chart(NullinfChart::NearI0, 1.0, 0.0, 4.0, &mut rho, &mut x) }, NullinfStatus::Domain);
    assert!(last_error().contains("domain"));
    assert_eq!(unsafe { nullinf_to_chart(NullinfChart::NearI0, 1.0, 3.0, 4.0, ptr::null_mut(), &mut x) }, NullinfStatus::NullPointer);
}

#[test]
fn threshold_checks_report_failures() {
    let mut w = nullinf_weights_default();
    assert_eq!(w.n, 3);
    w.alpha_i = -0.6;
    w.alpha0 = 0.0;
    let (mut pass, mut failed) = (false, 99usize);
    let tag = c"ThmExterior";
    assert_eq!(unsafe { nullinf_threshold_check(tag.as_ptr(), &w, &mut pass, &mut failed) }, NullinfStatus::Ok);
    assert!(pass);
    assert_eq!(failed, 0);
    w.alpha_i = -0.4;
    assert_eq!(unsafe { nullinf_threshold_check(tag.as_ptr(), &w, &mut pass, ptr::null_mut()) }, NullinfStatus::Ok);
    assert!(!pass);
    assert!(last_error().contains("alpha_I < -1/2"));
    let st = unsafe { nullinf_threshold_check(c"ThmNope".as_ptr(), &w, &mut pass, ptr::null_mut()) };
    assert_eq!(st, NullinfStatus::Config);
    assert!(last_error().contains("ThmNope"));
}

#[test]
fn config_run_and_results() {
    let (st, cfg) = parse("kind = \"multiplier\"\n[metric]\nname = \"model_p1\"\np1 = 0.2\n[multiplier]\nc_grid = [0.01, 0.1]\n");
    assert_eq!(st, NullinfStatus::Ok, "{}", last_error());
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { nullinf_run(cfg, &mut res) }, NullinfStatus::Ok, "{}", last_error());

    let mut rows = 0usize;
    assert_eq!(unsafe { nullinf_results_rows(res, c"scan".as_ptr(), &mut rows) }, NullinfStatus::Ok);
    assert_eq!(rows, 2);
    let mut buf = [0.0f64; 4];
    let mut len = 0usize;
    let st = unsafe { nullinf_results_column(res, c"scan".as_ptr(), c"c".as_ptr(), buf.as_mut_ptr(), buf.len(), &mut len) };
    assert_eq!(st, NullinfStatus::Ok, "{}", last_error());
    assert_eq!(&buf[..len], &[0.01, 0.1]);
    let st = unsafe { nullinf_results_column(res, c"scan".as_ptr(), c"c".as_ptr(), buf.as_mut_ptr(), 1, &mut len) };
    assert_eq!((st, len), (NullinfStatus::InvalidArgument, 2));
    let st = unsafe { nullinf_results_rows(res, c"missing".as_ptr(), &mut rows) };
    assert_eq!(st, NullinfStatus::NotFound);

    let mut v = f64::NAN;
    let st = unsafe { nullinf_results_summary(res, c"nope".as_ptr(), &mut v) };
    assert_eq!(st, NullinfStatus::NotFound);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { nullinf_results_to_json(res, &mut json) }, NullinfStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.starts_with("{\"schema_version\":1"));
    assert_eq!(nullinf::cli::from_json_str(&text).unwrap().kind, "multiplier");
    unsafe {
        nullinf_string_free(json);
        nullinf_results_free(res);
        nullinf_config_free(cfg);
    }
}

#[test]
fn seeds_are_reproducible() {
    let run = |seed: u64| -> String {
        let (st, cfg) = parse("kind = \"mellin\"\n[mellin]\ngamma_plus = [0.0]\nfunctions = 2\n");
        assert_eq!(st, NullinfStatus::Ok);
        let mut res = ptr::null_mut();
        let mut json = ptr::null_mut();
        unsafe {
            assert_eq!(nullinf_config_set_seed(cfg, seed), NullinfStatus::Ok);
            assert_eq!(nullinf_run(cfg, &mut res), NullinfStatus::Ok);
            nullinf_results_to_json(res, &mut json);
            let s = CStr::from_ptr(json).to_str().unwrap().to_owned();
            nullinf_string_free(json);
            nullinf_results_free(res);
            nullinf_config_free(cfg);
            s
        }
    };
    assert_eq!(run(3), run(3));
    assert_ne!(run(3), run(4));
}

#[test]
fn errors_map_to_status_codes() {
    let (st, cfg) = parse("kind = \"flow\"\n[flow]\nrho_zero = 1\n");
    assert_eq!(st, NullinfStatus::Config);
    assert!(cfg.is_null());
    assert!(last_error().contains("test.toml:3:"));

    let (st, cfg) = parse("kind = \"solve\"\n[weights]\nalpha_i = -0.4\n[solve]\ngate = \"ThmExterior\"\n[[solve.case]]\nlabel = \"a\"\nforcing = [{ ell = 0 }]\n");
    assert_eq!(st, NullinfStatus::Ok, "{}", last_error());
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { nullinf_run(cfg, &mut res) }, NullinfStatus::ThresholdViolation);
    assert!(res.is_null());
    unsafe { nullinf_config_free(cfg) };

    assert_eq!(unsafe { nullinf_run(ptr::null(), &mut res) }, NullinfStatus::NullPointer);
    unsafe {
        nullinf_config_free(ptr::null_mut());
        nullinf_results_free(ptr::null_mut());
        nullinf_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(nullinf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(crate_dir().join("include/nullinf.h")).unwrap();
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let mut count = 0;
    for line in src.lines().filter(|l| l.contains("extern \"C\" fn ")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
        count += 1;
    }
    assert!(count >= 14);
    for ty in ["typedef struct NullinfConfig NullinfConfig;", "typedef struct NullinfResults NullinfResults;", "NULLINF_STATUS_PANIC = 9"] {
        assert!(header.contains(ty), "{ty}");
    }
}

/// Compile `tests/c_smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libnullinf_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let out_dir = tempfile_dir();
    let bin = out_dir.join("c_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c_smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    std::fs::remove_dir_all(&out_dir).ok();
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("nullinf-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
