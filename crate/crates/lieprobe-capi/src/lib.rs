//! C ABI over the core crate: opaque graph handles, integer status codes,
//! JSON strings for structured results. No call unwinds into the caller;
//! panics are caught at the boundary and reported as [`LpStatus::Panic`].
//! Failure messages are kept per thread and read back with
//! [`lp_last_error`].

use lieprobe::generators::{grassmann_lines, half_spin, polar_space, GeneratorError, PolarKind};
use lieprobe::graph::{are_isomorphic, read_auto, write_graph6, FormatError, GraphError, MAX_N};
use lieprobe::recognize::{recognize, srg_parameters, SrgParameters};
use lieprobe::Graph;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status returned by every fallible entry point. The nonzero values track
/// the CLI exit codes: bad argument 1, unparseable input 2, analysis
/// failure 3, size guard 4; a caught panic is 5.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    Argument = 1,
    Parse = 2,
    Analysis = 3,
    TooLarge = 4,
    Panic = 5,
}

/// Which geometry [`lp_generate`] builds. `param` is the projective
/// dimension of the ambient space for the polar families and the series
/// index n for the Grassmann and half-spin families.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpFamily {
    W = 0,
    Q = 1,
    QPlus = 2,
    QMinus = 3,
    Grassmann = 4,
    HalfSpin = 5,
}

/// Strongly regular graph parameters. When `is_srg` is 0 the counts are
/// meaningless and set to 0.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpSrgParameters {
    pub is_srg: i32,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

/// Opaque graph handle; create with [`lp_graph_from_g6`] or
/// [`lp_generate`], release with [`lp_graph_free`].
pub struct LpGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let stored = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = stored);
}

type Fallible = Result<(), (LpStatus, String)>;

fn run(body: impl FnOnce() -> Fallible) -> LpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            LpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic of unknown type".into());
            set_error(&format!("internal panic: {msg}"));
            LpStatus::Panic
        }
    }
}

fn arg_error(msg: &str) -> (LpStatus, String) {
    (LpStatus::Argument, msg.into())
}

unsafe fn require_graph<'a>(g: *const LpGraph, name: &str) -> Result<&'a Graph, (LpStatus, String)> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| arg_error(&format!("{name} is null")))
}

unsafe fn require_str<'a>(text: *const c_char, name: &str) -> Result<&'a str, (LpStatus, String)> {
    if text.is_null() {
        return Err(arg_error(&format!("{name} is null")));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| (LpStatus::Parse, format!("{name} is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library output never contains NUL").into_raw()
}

/// Version of the library as a static string; do not free.
#[no_mangle]
pub extern "C" fn lp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the most recent failure on this thread, empty after a
/// success. The pointer stays valid until the next call on the same
/// thread; do not free.
#[no_mangle]
pub extern "C" fn lp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from a `char**` out-parameter of
/// this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses graph6 or sparse6 text (header optional) into a new handle.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn lp_graph_from_g6(
    text: *const c_char,
    out: *mut *mut LpGraph,
) -> LpStatus {
    run(|| {
        if out.is_null() {
            return Err(arg_error("out is null"));
        }
        *out = std::ptr::null_mut();
        let text = require_str(text, "text")?;
        let g = read_auto(text).map_err(|e| match e {
            FormatError::GraphTooLarge { .. } => (LpStatus::TooLarge, e.to_string()),
            _ => (LpStatus::Parse, e.to_string()),
        })?;
        *out = Box::into_raw(Box::new(LpGraph { inner: g }));
        Ok(())
    })
}

/// Releases a graph handle; null is a no-op.
///
/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lp_graph_free(g: *mut LpGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 when `g` is null.
///
/// # Safety
/// `g` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lp_graph_n(g: *const LpGraph) -> u64 {
    g.as_ref().map_or(0, |h| h.inner.n() as u64)
}

/// Encodes the graph as headerless graph6 into a newly allocated string;
/// free it with [`lp_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn lp_graph_to_g6(g: *const LpGraph, out: *mut *mut c_char) -> LpStatus {
    run(|| {
        if out.is_null() {
            return Err(arg_error("out is null"));
        }
        *out = std::ptr::null_mut();
        let g = require_graph(g, "g")?;
        if g.n() as u64 > MAX_N {
            return Err((
                LpStatus::TooLarge,
                format!("graph on {} vertices exceeds the format limit {MAX_N}", g.n()),
            ));
        }
        *out = into_c_string(write_graph6(g));
        Ok(())
    })
}

/// Builds the point graph of a catalogued geometry: one of the polar
/// spaces (`param` = projective dimension), a line Grassmannian or a
/// half-spin geometry (`param` = series index n).
///
/// # Safety
/// `family` must be a valid `LpFamily` value; `out` must point to writable
/// memory.
#[no_mangle]
pub unsafe extern "C" fn lp_generate(
    family: LpFamily,
    param: u32,
    q: u16,
    out: *mut *mut LpGraph,
) -> LpStatus {
    run(|| {
        if out.is_null() {
            return Err(arg_error("out is null"));
        }
        *out = std::ptr::null_mut();
        let param = param as usize;
        let d = match family {
            LpFamily::W => polar_space(PolarKind::W, param, q),
            LpFamily::Q => polar_space(PolarKind::Q, param, q),
            LpFamily::QPlus => polar_space(PolarKind::QPlus, param, q),
            LpFamily::QMinus => polar_space(PolarKind::QMinus, param, q),
            LpFamily::Grassmann => grassmann_lines(param, q),
            LpFamily::HalfSpin => half_spin(param, q),
        }
        .map_err(|e| {
            let status = match e {
                GeneratorError::InstanceTooLarge { .. } => LpStatus::TooLarge,
                GeneratorError::RankTooSmall { .. }
                | GeneratorError::InvalidDimension { .. }
                | GeneratorError::Algebra(_) => LpStatus::Argument,
                GeneratorError::Geometry(_) => LpStatus::Analysis,
            };
            (status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(LpGraph { inner: d.point_graph() }));
        Ok(())
    })
}

/// Runs recognition and returns the full report as JSON in a newly
/// allocated string; free it with [`lp_string_free`]. Unrecognized graphs
/// still return `LP_STATUS_OK`; the verdict is the `family` field of the
/// report.
///
/// # Safety
/// `g` must be a live handle; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn lp_recognize_json(
    g: *const LpGraph,
    out: *mut *mut c_char,
) -> LpStatus {
    run(|| {
        if out.is_null() {
            return Err(arg_error("out is null"));
        }
        *out = std::ptr::null_mut();
        let g = require_graph(g, "g")?;
        *out = into_c_string(recognize(g).to_json());
        Ok(())
    })
}

/// Sets `*result` to 1 when the two graphs are isomorphic, 0 otherwise.
///
/// # Safety
/// `a` and `b` must be live handles; `result` must point to writable
/// memory.
#[no_mangle]
pub unsafe extern "C" fn lp_are_isomorphic(
    a: *const LpGraph,
    b: *const LpGraph,
    result: *mut i32,
) -> LpStatus {
    run(|| {
        if result.is_null() {
            return Err(arg_error("result is null"));
        }
        *result = 0;
        let a = require_graph(a, "a")?;
        let b = require_graph(b, "b")?;
        let witness = are_isomorphic(a, b).map_err(|e| match e {
            GraphError::SizeLimitExceeded { .. } => (LpStatus::TooLarge, e.to_string()),
            _ => (LpStatus::Analysis, e.to_string()),
        })?;
        *result = witness.is_some() as i32;
        Ok(())
    })
}

/// Fills `*out` with the strongly regular graph parameters, or `is_srg ==
/// 0` when the graph is not strongly regular (complete and disconnected
/// graphs included).
///
/// # Safety
/// `g` must be a live handle; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn lp_srg_parameters(
    g: *const LpGraph,
    out: *mut LpSrgParameters,
) -> LpStatus {
    run(|| {
        if out.is_null() {
            return Err(arg_error("out is null"));
        }
        *out = LpSrgParameters { is_srg: 0, v: 0, k: 0, lambda: 0, mu: 0 };
        let g = require_graph(g, "g")?;
        if let SrgParameters::Srg { v, k, lambda, mu } = srg_parameters(g) {
            *out = LpSrgParameters {
                is_srg: 1,
                v: v as u64,
                k: k as u64,
                lambda: lambda as u64,
                mu: mu as u64,
            };
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn make(family: LpFamily, param: u32, q: u16) -> *mut LpGraph {
        let mut g = std::ptr::null_mut();
        let status = unsafe { lp_generate(family, param, q, &mut g) };
        assert_eq!(status, LpStatus::Ok);
        assert!(!g.is_null());
        g
    }

    fn take_string(s: *mut c_char) -> String {
        assert!(!s.is_null());
        let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { lp_string_free(s) };
        out
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(lp_last_error()) }.to_str().unwrap().to_string()
    }

    #[test]
    fn g6_round_trip() {
        let text = CString::new("IsP@OkWHG").unwrap(); // Petersen
        let mut g = std::ptr::null_mut();
        assert_eq!(unsafe { lp_graph_from_g6(text.as_ptr(), &mut g) }, LpStatus::Ok);
        assert_eq!(unsafe { lp_graph_n(g) }, 10);
        let mut s = std::ptr::null_mut();
        assert_eq!(unsafe { lp_graph_to_g6(g, &mut s) }, LpStatus::Ok);
        assert_eq!(take_string(s), "IsP@OkWHG");
        unsafe { lp_graph_free(g) };
    }

    #[test]
    fn malformed_text_reports_parse_failure() {
        let text = CString::new("!!!").unwrap();
        let mut g = std::ptr::null_mut();
        assert_eq!(unsafe { lp_graph_from_g6(text.as_ptr(), &mut g) }, LpStatus::Parse);
        assert!(g.is_null());
        assert!(!last_error().is_empty());
    }

    #[test]
    fn null_arguments_are_refused() {
        let mut g = std::ptr::null_mut();
        assert_eq!(
            unsafe { lp_graph_from_g6(std::ptr::null(), &mut g) },
            LpStatus::Argument
        );
        assert_eq!(
            unsafe { lp_recognize_json(std::ptr::null(), &mut std::ptr::null_mut()) },
            LpStatus::Argument
        );
        assert_eq!(last_error(), "g is null");
    }

    #[test]
    fn generates_and_recognizes_w52() {
        let g = make(LpFamily::W, 5, 2);
        assert_eq!(unsafe { lp_graph_n(g) }, 63);
        let mut s = std::ptr::null_mut();
        assert_eq!(unsafe { lp_recognize_json(g, &mut s) }, LpStatus::Ok);
        let json = take_string(s);
        assert!(json.contains("\"outcome\": \"W(5, 2)\""), "{json}");
        unsafe { lp_graph_free(g) };
    }

    #[test]
    fn rejects_bad_generator_arguments() {
        let mut g = std::ptr::null_mut();
        assert_eq!(unsafe { lp_generate(LpFamily::W, 4, 2, &mut g) }, LpStatus::Argument);
        assert_eq!(unsafe { lp_generate(LpFamily::W, 11, 4, &mut g) }, LpStatus::TooLarge);
        assert!(last_error().contains("instance too large"));
    }

    #[test]
    fn isomorphism_and_srg() {
        let a = make(LpFamily::W, 3, 2);
        let b = make(LpFamily::Q, 4, 2); // same graph for even q
        let mut iso = -1;
        assert_eq!(unsafe { lp_are_isomorphic(a, b, &mut iso) }, LpStatus::Ok);
        assert_eq!(iso, 1);

        let w52 = make(LpFamily::W, 5, 2);
        let mut p = LpSrgParameters { is_srg: 0, v: 0, k: 0, lambda: 0, mu: 0 };
        assert_eq!(unsafe { lp_srg_parameters(w52, &mut p) }, LpStatus::Ok);
        assert_eq!((p.is_srg, p.v, p.k, p.lambda, p.mu), (1, 63, 30, 13, 15));

        let mut iso2 = -1;
        assert_eq!(unsafe { lp_are_isomorphic(a, w52, &mut iso2) }, LpStatus::Ok);
        assert_eq!(iso2, 0);
        for g in [a, b, w52] {
            unsafe { lp_graph_free(g) };
        }
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(lp_version()) }.to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
