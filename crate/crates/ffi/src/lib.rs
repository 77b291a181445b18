//! C ABI over the Poisson bracket engine.
//!
//! Every entry point returns a [`PfStatus`]. On failure the message is kept
//! per thread and read with [`pf_last_error`]. Strings handed out by the
//! library are owned by the caller and released with [`pf_string_free`];
//! handles are released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use poisson_forge::algebra::LieAlgebra;
use poisson_forge::cli;
use poisson_forge::config::{ConfigError, ResolvedStructure, RunConfig};
use poisson_forge::loops::{self, TrigLoop, TrigLoopWire};
use poisson_forge::poisson::{self, PoissonStructure};
use poisson_forge::rep::Representation;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Configuration could not be read, parsed or validated.
    Config = 3,
    /// A computation rejected its input.
    Compute = 4,
    /// A named check does not exist.
    UnknownCheck = 5,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 6,
    /// A verification ran and at least one check failed.
    CheckFailed = 7,
    Panic = 99,
}

/// Poisson structure together with its coordinate names.
pub struct PfStructure {
    inner: ResolvedStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(PfStatus, String);

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure(PfStatus::Config, e.to_string())
    }
}

impl From<poisson_forge::Error> for Failure {
    fn from(e: poisson_forge::Error) -> Self {
        Failure(PfStatus::Compute, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<PfStatus, Failure>) -> PfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PfStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(PfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(PfStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL bytes replaced").into_raw()
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` is null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Lie-Poisson structure of a builtin algebra: `so3`, `heisenberg`, `so3+r`
/// or `abelian:<n>`.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_structure_linear(name: *const c_char, out: *mut *mut PfStructure) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let name = read_str(name, "name")?;
        let g: LieAlgebra = poisson_forge::config::builtin_algebra(name)
            .ok_or_else(|| Failure(PfStatus::Config, format!("unknown algebra {name:?}")))?;
        let structure = PoissonStructure::linear(g)?;
        let variables = structure.names().to_vec();
        *out = Box::into_raw(Box::new(PfStructure {
            inner: ResolvedStructure { structure, variables },
        }));
        Ok(PfStatus::Ok)
    })
}

/// Structure described by the `[algebra]` and `[structure]` sections of a
/// TOML or JSON run configuration.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_structure_from_config(
    path: *const c_char,
    out: *mut *mut PfStructure,
) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let cfg = RunConfig::load(Path::new(read_str(path, "path")?))?;
        *out = Box::into_raw(Box::new(PfStructure {
            inner: cfg.resolve_structure()?,
        }));
        Ok(PfStatus::Ok)
    })
}

/// # Safety
/// `s` is null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_structure_free(s: *mut PfStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of coordinates, or 0 for a null handle.
///
/// # Safety
/// `s` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_structure_dim(s: *const PfStructure) -> usize {
    s.as_ref().map_or(0, |s| s.inner.structure.dim())
}

/// `{F, G}` as text in the structure's coordinate names.
///
/// # Safety
/// `s` is a live handle; `f`, `g` are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_bracket(
    s: *const PfStructure,
    f: *const c_char,
    g: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = s
            .as_ref()
            .ok_or_else(|| Failure(PfStatus::NullPointer, "structure is null".into()))?;
        let b = cli::bracket_of(&s.inner, read_str(f, "F")?, read_str(g, "G")?)?;
        *out = to_c_string(b.display_with(Some(&s.inner.variables)));
        Ok(PfStatus::Ok)
    })
}

/// Exact Jacobiator `{F,{G,H}} + {G,{H,F}} + {H,{F,G}}` as text.
///
/// # Safety
/// `s` is a live handle; `f`, `g`, `h` are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_jacobiator(
    s: *const PfStructure,
    f: *const c_char,
    g: *const c_char,
    h: *const c_char,
    out: *mut *mut c_char,
) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = s
            .as_ref()
            .ok_or_else(|| Failure(PfStatus::NullPointer, "structure is null".into()))?;
        let r = &s.inner;
        let f = r.parse_poly("F", read_str(f, "F")?)?;
        let g = r.parse_poly("G", read_str(g, "G")?)?;
        let h = r.parse_poly("H", read_str(h, "H")?)?;
        let j = poisson::jacobiator(&f, &g, &h, &r.structure)?;
        *out = to_c_string(j.display_with(Some(&r.variables)));
        Ok(PfStatus::Ok)
    })
}

/// Runs every task of a configuration and writes the JSON report to
/// `report`. Returns `CheckFailed` (with the report still written) when any
/// check fails.
///
/// # Safety
/// `path` is NUL-terminated; `report` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_verify(path: *const c_char, parallel: bool, report: *mut *mut c_char) -> PfStatus {
    guard(|| {
        check_out(report, "report")?;
        let cfg = RunConfig::load(Path::new(read_str(path, "path")?))?;
        let r = cli::run(&cfg, parallel)?;
        *report = to_c_string(r.to_json());
        Ok(if r.passed() { PfStatus::Ok } else { PfStatus::CheckFailed })
    })
}

/// Anchor and identity of a named check, one per line.
///
/// # Safety
/// `name` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_explain(name: *const c_char, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let name = read_str(name, "name")?;
        let info = cli::explain(name)
            .ok_or_else(|| Failure(PfStatus::UnknownCheck, format!("unknown check {name:?}")))?;
        *out = to_c_string(format!("{}\n{}", info.anchor, info.identity));
        Ok(PfStatus::Ok)
    })
}

/// Holonomy over `[0, time]` of a trigonometric loop given as JSON
/// (`{"k": .., "N": .., "a0": [..], "cos": [[n, [..]]], "sin": [[n, [..]]]}`)
/// in the builtin group `group` (`so2`, `so3`, `su2`, `u2`, `torus2`).
/// Writes the row-major matrix into `buf` and its side length to `side`.
///
/// # Safety
/// `group`, `loop_json` are NUL-terminated; `buf` holds `cap` doubles;
/// `side` is writable.
#[no_mangle]
pub unsafe extern "C" fn pf_holonomy(
    group: *const c_char,
    loop_json: *const c_char,
    time: f64,
    step: f64,
    buf: *mut f64,
    cap: usize,
    side: *mut usize,
) -> PfStatus {
    guard(|| {
        check_out(side, "side")?;
        let rep = Representation::builtin(read_str(group, "group")?)?;
        let wire: TrigLoopWire = serde_json::from_str(read_str(loop_json, "loop_json")?)
            .map_err(|e| Failure(PfStatus::Config, format!("loop_json: {e}")))?;
        let xi = TrigLoop::from_wire(&wire, Arc::new(rep.algebra().clone()))?;
        let m = loops::holonomy(&xi, &rep, time, step)?;
        let n = m.nrows();
        *side = n;
        if cap < n * n {
            return Err(Failure(
                PfStatus::BufferTooSmall,
                format!("need {} doubles, got {cap}", n * n),
            ));
        }
        check_out(buf, "buf")?;
        let out = std::slice::from_raw_parts_mut(buf, n * n);
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] = m[(r, c)];
            }
        }
        Ok(PfStatus::Ok)
    })
}
