//! C ABI for `planar-limits`.
//!
//! Conventions, shared by every function:
//!
//! * The return value is a [`PllStatus`]; results travel through out-pointers,
//!   which are written only on success.
//! * After a failure, [`pll_last_error_message`] describes it. The message is
//!   thread-local and stays valid until the next call on the same thread.
//! * Handles (`PllNetwork`, `PllPacking`) are opaque and owned by the caller
//!   once returned; release them with the matching `*_free`. Strings returned
//!   through `char **` are released with [`pll_string_free`].
//! * Pointer arguments must be null or valid for the stated length; a null
//!   pointer where one is required yields `PLL_STATUS_NULL_POINTER`. Array
//!   arguments of length zero may be null.
//! * Panics never cross the boundary; they are reported as `PLL_STATUS_PANIC`.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use planar_limits::electric::{effective_resistance, escape_probability, Network};
use planar_limits::experiment::{run_experiment, ExperimentRecipe};
use planar_limits::generators;
use planar_limits::graph::io::{network_from_json, network_to_json};
use planar_limits::pack::{pack_triangulation, supported_points, to_svg, CirclePacking, PointCloud, SvgOptions};
use planar_limits::startree::star_tree_transform;
use planar_limits::walks::avoidance_probability_with;
use planar_limits::walks::StartLaw;
use planar_limits::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PllStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Disconnected = 4,
    NoConvergence = 5,
    SizeCap = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// A network (a plane graph with edge resistances).
pub struct PllNetwork(Network);

/// A circle packing.
pub struct PllPacking(CirclePacking);

/// Monte Carlo avoidance estimate with a Wilson 95% interval.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PllEstimate {
    pub phi: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub successes: u64,
    pub trials: u64,
}

struct Failure(PllStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidGraph(_) | Error::NotTriangulation(_) => PllStatus::InvalidGraph,
            Error::Disconnected(_) => PllStatus::Disconnected,
            Error::NoConvergence { .. } | Error::NotPositiveDefinite => PllStatus::NoConvergence,
            Error::SizeCap { .. } => PllStatus::SizeCap,
            Error::Parse(_) => PllStatus::Parse,
            Error::Io(_) => PllStatus::Io,
            Error::VertexOutOfRange { .. }
            | Error::InvalidParameter { .. }
            | Error::OverlappingSets(_)
            | Error::NotAFlow(_)
            | Error::Precondition(_)
            | Error::InfiniteInternalResistance(..) => PllStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome) -> PllStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            PllStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {what}"));
            PllStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PllStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(PllStatus::InvalidArgument, msg.into())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PllStatus::Parse, format!("`{what}` is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String, what: &str) -> Outcome {
    let c = CString::new(s).map_err(|_| invalid("output contains NUL"))?;
    if out.is_null() {
        return Err(null(what));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_network(out: *mut *mut PllNetwork, net: Network) -> Outcome {
    put(out, Box::into_raw(Box::new(PllNetwork(net))), "out")
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pll_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null after a success.
#[no_mangle]
pub extern "C" fn pll_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pll_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses graph or network JSON (`{"n", "rot", "R"?, "root"?}`).
#[no_mangle]
pub unsafe extern "C" fn pll_network_from_json(json: *const c_char, out: *mut *mut PllNetwork) -> PllStatus {
    guard(|| {
        let (net, _) = network_from_json(text(json, "json")?)?;
        put_network(out, net)
    })
}

/// `n x n` grid with unit resistances.
#[no_mangle]
pub unsafe extern "C" fn pll_network_grid(n: usize, out: *mut *mut PllNetwork) -> PllStatus {
    guard(|| put_network(out, Network::unit(generators::grid(n)?)))
}

/// Sphere triangulation on `n` vertices after `steps` edge flips.
#[no_mangle]
pub unsafe extern "C" fn pll_network_flip_triangulation(
    n: usize,
    steps: u64,
    seed: u64,
    out: *mut *mut PllNetwork,
) -> PllStatus {
    guard(|| put_network(out, Network::unit(generators::flip_mcmc_triangulation(n, steps, seed)?)))
}

/// Sharpness graph of height `h`; `out_root` receives the top of the tree.
#[no_mangle]
pub unsafe extern "C" fn pll_network_sharpness(
    h: usize,
    alpha: f64,
    out: *mut *mut PllNetwork,
    out_root: *mut usize,
) -> PllStatus {
    guard(|| {
        if out_root.is_null() {
            return Err(null("out_root"));
        }
        let s = generators::sharpness_graph(h, alpha)?;
        put_network(out, s.network)?;
        put(out_root, s.root, "out_root")
    })
}

/// Releases a network. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pll_network_free(net: *mut PllNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pll_network_vertex_count(net: *const PllNetwork, out: *mut usize) -> PllStatus {
    guard(|| put(out, deref(net, "net")?.0.graph().vertex_count(), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn pll_network_edge_count(net: *const PllNetwork, out: *mut usize) -> PllStatus {
    guard(|| put(out, deref(net, "net")?.0.graph().edge_count(), "out"))
}

/// Network JSON; free the result with [`pll_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pll_network_to_json(net: *const PllNetwork, out: *mut *mut c_char) -> PllStatus {
    guard(|| put_string(out, network_to_json(&deref(net, "net")?.0, None), "out"))
}

/// `Reff(A <-> Z)`; `+inf` when the sets are disconnected or one is empty.
#[no_mangle]
pub unsafe extern "C" fn pll_effective_resistance(
    net: *const PllNetwork,
    a: *const usize,
    a_len: usize,
    z: *const usize,
    z_len: usize,
    out: *mut f64,
) -> PllStatus {
    guard(|| {
        let net = &deref(net, "net")?.0;
        let r = effective_resistance(net, slice(a, a_len, "a")?, slice(z, z_len, "z")?)?;
        put(out, r, "out")
    })
}

/// `P_a(tau_z < tau_a^+)`.
#[no_mangle]
pub unsafe extern "C" fn pll_escape_probability(
    net: *const PllNetwork,
    a: usize,
    z: usize,
    out: *mut f64,
) -> PllStatus {
    guard(|| put(out, escape_probability(&deref(net, "net")?.0, a, z)?, "out"))
}

/// Probability that a walk from a uniform start avoids it at times `1..=horizon`.
#[no_mangle]
pub unsafe extern "C" fn pll_avoidance_probability(
    net: *const PllNetwork,
    horizon: usize,
    trials: u64,
    seed: u64,
    out: *mut PllEstimate,
) -> PllStatus {
    guard(|| {
        let e = avoidance_probability_with(&deref(net, "net")?.0, StartLaw::Uniform, horizon, trials, seed)?;
        put(
            out,
            PllEstimate {
                phi: e.phi,
                ci_low: e.ci.0,
                ci_high: e.ci.1,
                successes: e.successes,
                trials: e.trials,
            },
            "out",
        )
    })
}

/// Star-tree transform of the network's graph as JSON with markings and codes.
#[no_mangle]
pub unsafe extern "C" fn pll_startree_json(net: *const PllNetwork, out: *mut *mut c_char) -> PllStatus {
    guard(|| {
        let st = star_tree_transform(deref(net, "net")?.0.graph());
        put_string(out, st.to_json(), "out")
    })
}

/// Packs a disk triangulation whose outer face is `boundary` with the given radii.
#[no_mangle]
pub unsafe extern "C" fn pll_pack_triangulation(
    net: *const PllNetwork,
    boundary: *const usize,
    radii: *const f64,
    len: usize,
    out: *mut *mut PllPacking,
) -> PllStatus {
    guard(|| {
        let g = deref(net, "net")?.0.graph();
        let pairs: Vec<(usize, f64)> = slice(boundary, len, "boundary")?
            .iter()
            .copied()
            .zip(slice(radii, len, "radii")?.iter().copied())
            .collect();
        let p = pack_triangulation(g, &pairs)?;
        put(out, Box::into_raw(Box::new(PllPacking(p))), "out")
    })
}

/// Releases a packing. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pll_packing_free(p: *mut PllPacking) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pll_packing_vertex_count(p: *const PllPacking, out: *mut usize) -> PllStatus {
    guard(|| put(out, deref(p, "packing")?.0.radii.len(), "out"))
}

/// Center and radius of circle `v`.
#[no_mangle]
pub unsafe extern "C" fn pll_packing_circle(
    p: *const PllPacking,
    v: usize,
    out_x: *mut f64,
    out_y: *mut f64,
    out_r: *mut f64,
) -> PllStatus {
    guard(|| {
        let p = &deref(p, "packing")?.0;
        if v >= p.radii.len() {
            return Err(invalid(format!("vertex {v} out of range ({} circles)", p.radii.len())));
        }
        if out_x.is_null() || out_y.is_null() || out_r.is_null() {
            return Err(null("out_x/out_y/out_r"));
        }
        put(out_x, p.centers[v][0], "out_x")?;
        put(out_y, p.centers[v][1], "out_y")?;
        put(out_r, p.radii[v], "out_r")
    })
}

/// SVG drawing; `root < 0` highlights nothing.
#[no_mangle]
pub unsafe extern "C" fn pll_packing_svg(
    p: *const PllPacking,
    root: i64,
    edges: bool,
    out: *mut *mut c_char,
) -> PllStatus {
    guard(|| {
        let opts = SvgOptions {
            root: usize::try_from(root).ok(),
            edges,
        };
        put_string(out, to_svg(&deref(p, "packing")?.0, &opts), "out")
    })
}

/// Number of `(delta, s)`-supported points among `count` points given as `x0, y0, x1, y1, ...`.
#[no_mangle]
pub unsafe extern "C" fn pll_supported_count(
    xy: *const f64,
    count: usize,
    delta: f64,
    s: usize,
    out: *mut usize,
) -> PllStatus {
    guard(|| {
        let flat = slice(xy, count.checked_mul(2).ok_or_else(|| invalid("count overflows"))?, "xy")?;
        let cloud = PointCloud::new(flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect())?;
        put(out, supported_points(&cloud, delta, s)?.count, "out")
    })
}

/// Runs an experiment recipe given as JSON and writes its outputs; `out_pass` receives
/// whether every audit held.
#[no_mangle]
pub unsafe extern "C" fn pll_run_experiment(recipe_json: *const c_char, out_pass: *mut bool) -> PllStatus {
    guard(|| {
        if out_pass.is_null() {
            return Err(null("out_pass"));
        }
        let recipe = ExperimentRecipe::from_json(text(recipe_json, "recipe_json")?)?;
        let report = run_experiment(&recipe)?;
        put(out_pass, report.pass(), "out_pass")
    })
}
