use std::ffi::{CStr, CString};
use std::ptr;

use planar_limits_ffi::*;

fn last_error() -> String {
    let p = pll_last_error_message();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { pll_string_free(p) };
    s
}

fn grid(n: usize) -> *mut PllNetwork {
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { pll_network_grid(n, &mut net) }, PllStatus::Ok);
    net
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(pll_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn grid_corner_resistance() {
    let net = grid(4);
    let (mut n, mut m) = (0usize, 0usize);
    unsafe {
        assert_eq!(pll_network_vertex_count(net, &mut n), PllStatus::Ok);
        assert_eq!(pll_network_edge_count(net, &mut m), PllStatus::Ok);
    }
    assert_eq!((n, m), (16, 24));

    let (a, z) = ([0usize], [15usize]);
    let mut r = 0.0;
    let st = unsafe { pll_effective_resistance(net, a.as_ptr(), 1, z.as_ptr(), 1, &mut r) };
    assert_eq!(st, PllStatus::Ok);
    // Opposite corners of the 4x4 grid: 13/7 by exact rational elimination.
    assert!((r - 13.0 / 7.0).abs() < 1e-12, "{r}");
    assert!(pll_last_error_message().is_null());

    let mut p = 0.0;
    assert_eq!(unsafe { pll_escape_probability(net, 0, 15, &mut p) }, PllStatus::Ok);
    assert!((p - 1.0 / (2.0 * r)).abs() < 1e-12);
    unsafe { pll_network_free(net) };
}

#[test]
fn errors_are_reported_not_panicked() {
    let net = grid(3);
    let (a, z) = ([0usize], [42usize]);
    let mut r = 0.0;
    let st = unsafe { pll_effective_resistance(net, a.as_ptr(), 1, z.as_ptr(), 1, &mut r) };
    assert_eq!(st, PllStatus::InvalidArgument);
    assert!(last_error().contains("42"));

    let st = unsafe { pll_effective_resistance(net, ptr::null(), 1, z.as_ptr(), 1, &mut r) };
    assert_eq!(st, PllStatus::NullPointer);
    let st = unsafe { pll_network_vertex_count(ptr::null(), ptr::null_mut()) };
    assert_eq!(st, PllStatus::NullPointer);

    let mut x = 0.0;
    let (mut y, mut rad) = (0.0, 0.0);
    assert_eq!(
        unsafe { pll_packing_circle(ptr::null(), 0, &mut x, &mut y, &mut rad) },
        PllStatus::NullPointer
    );
    unsafe { pll_network_free(net) };
    unsafe { pll_network_free(ptr::null_mut()) };
    unsafe { pll_string_free(ptr::null_mut()) };
}

#[test]
fn json_round_trip_and_parse_errors() {
    let net = grid(3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pll_network_to_json(net, &mut s) }, PllStatus::Ok);
    let json = CString::new(take_string(s)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { pll_network_from_json(json.as_ptr(), &mut back) }, PllStatus::Ok);
    let mut n = 0;
    unsafe { pll_network_vertex_count(back, &mut n) };
    assert_eq!(n, 9);

    let bad = CString::new("{\"n\": 2, \"rot\": [[1]]}").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { pll_network_from_json(bad.as_ptr(), &mut out) };
    assert_ne!(st, PllStatus::Ok);
    assert!(out.is_null(), "out-pointer must be untouched on failure");
    assert!(!last_error().is_empty());
    unsafe {
        pll_network_free(net);
        pll_network_free(back);
    }
}

#[test]
fn sharpness_root_and_startree() {
    let mut net = ptr::null_mut();
    let mut root = usize::MAX;
    assert_eq!(unsafe { pll_network_sharpness(3, 0.5, &mut net, &mut root) }, PllStatus::Ok);
    let mut n = 0;
    unsafe { pll_network_vertex_count(net, &mut n) };
    assert!(root < n);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pll_startree_json(net, &mut s) }, PllStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert!(v["marking"].is_array());
    unsafe { pll_network_free(net) };
}

#[test]
fn avoidance_on_a_cycle_is_in_range() {
    let mut net = ptr::null_mut();
    let json = CString::new(r#"{"n":5,"rot":[[1,4],[2,0],[3,1],[4,2],[0,3]]}"#).unwrap();
    assert_eq!(unsafe { pll_network_from_json(json.as_ptr(), &mut net) }, PllStatus::Ok);
    let mut e = PllEstimate {
        phi: -1.0,
        ci_low: 0.0,
        ci_high: 0.0,
        successes: 0,
        trials: 0,
    };
    assert_eq!(unsafe { pll_avoidance_probability(net, 1, 1000, 7, &mut e) }, PllStatus::Ok);
    // One step on a cycle always leaves the start.
    assert_eq!(e.successes, 1000);
    assert_eq!(e.trials, 1000);
    assert!(e.ci_low <= e.phi && e.phi <= e.ci_high);
    unsafe { pll_network_free(net) };
}

#[test]
fn packing_k4_and_svg() {
    // K4 in the plane: outer triangle 0,1,2 and center 3.
    let json = CString::new(r#"{"n":4,"rot":[[1,3,2],[2,3,0],[0,3,1],[0,1,2]]}"#).unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { pll_network_from_json(json.as_ptr(), &mut net) }, PllStatus::Ok);
    let boundary = [0usize, 1, 2];
    let radii = [1.0f64; 3];
    let mut p = ptr::null_mut();
    let st = unsafe { pll_pack_triangulation(net, boundary.as_ptr(), radii.as_ptr(), 3, &mut p) };
    assert_eq!(st, PllStatus::Ok, "{}", last_error());
    let (mut x, mut y, mut r) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { pll_packing_circle(p, 3, &mut x, &mut y, &mut r) }, PllStatus::Ok);
    // Inner Soddy circle of three unit circles: 2/sqrt(3) - 1.
    assert!((r - (2.0 / 3f64.sqrt() - 1.0)).abs() < 1e-9, "{r}");
    assert_eq!(
        unsafe { pll_packing_circle(p, 4, &mut x, &mut y, &mut r) },
        PllStatus::InvalidArgument
    );

    let mut svg = ptr::null_mut();
    assert_eq!(unsafe { pll_packing_svg(p, 3, true, &mut svg) }, PllStatus::Ok);
    let svg = take_string(svg);
    assert_eq!(svg.matches("<circle").count(), 4);
    unsafe {
        pll_packing_free(p);
        pll_network_free(net);
    }
}

#[test]
fn supported_count_on_a_tight_cluster() {
    let xy = [0.0, 0.0, 0.001, 0.0, 0.0, 0.001, 5.0, 5.0];
    let mut count = usize::MAX;
    let st = unsafe { pll_supported_count(xy.as_ptr(), 4, 0.1, 2, &mut count) };
    assert_eq!(st, PllStatus::Ok, "{}", last_error());
    assert!(count <= 4);
    let st = unsafe { pll_supported_count(xy.as_ptr(), 4, -1.0, 2, &mut count) };
    assert_eq!(st, PllStatus::InvalidArgument);
}

#[test]
fn experiment_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let json = dir.path().join("s.json");
    let recipe = serde_json::json!({
        "name": "sharpness",
        "family": {"kind": "sharpness", "alpha": 0.5},
        "grid": {"h": [2, 3, 4, 5, 6]},
        "output": {"csv": csv, "json": json}
    });
    let text = CString::new(recipe.to_string()).unwrap();
    let mut pass = false;
    let st = unsafe { pll_run_experiment(text.as_ptr(), &mut pass) };
    assert_eq!(st, PllStatus::Ok, "{}", last_error());
    assert!(csv.exists() && json.exists());

    // A regular file where a directory should be.
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let missing = dir.path().join("blocker/out.csv");
    let recipe = serde_json::json!({
        "name": "sharpness",
        "family": {"kind": "sharpness", "alpha": 0.5},
        "grid": {"h": [2, 3, 4, 5, 6]},
        "output": {"csv": missing, "json": json}
    });
    let text = CString::new(recipe.to_string()).unwrap();
    let st = unsafe { pll_run_experiment(text.as_ptr(), &mut pass) };
    assert_eq!(st, PllStatus::Io, "{}", last_error());
}
