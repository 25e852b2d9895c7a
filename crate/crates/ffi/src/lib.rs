//! C ABI over the `lieode` library.
//!
//! Every fallible function returns a [`LieodeStatus`]; on failure the message
//! is available from [`lieode_last_error`]. Strings returned through `out`
//! pointers are owned by the caller and released with [`lieode_string_free`].
//! Handles are released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lieode::diffring::{DiffRing, XPoly};
use lieode::equations::{normal_form, LinearSystem};
use lieode::generators::{self, GeneratorLabel};
use lieode::jetfield::is_symmetry;
use lieode::liealg::{self, LieAlgebraPresentation};
use lieode::numflow::{numcheck, NumcheckConfig};
use lieode::variational::classify_algebra;
use lieode::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieodeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ComputationFailed = 4,
    Panic = 5,
}

/// A normal-form linear system with its coefficient ring.
pub struct LieodeSystem {
    ring: DiffRing,
    q: Option<XPoly>,
    qname: String,
    sys: LinearSystem,
}

/// Structure constants of the point symmetry basis.
pub struct LieodePresentation {
    n: usize,
    m: usize,
    pres: LieAlgebraPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> LieodeStatus {
    match e {
        Error::InvalidOrder(..) | Error::InvalidDimension(_) | Error::InvalidLabel { .. } | Error::Parse(_) => {
            LieodeStatus::InvalidArgument
        }
        _ => LieodeStatus::ComputationFailed,
    }
}

struct Fail(LieodeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LieodeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LieodeStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LieodeStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(LieodeStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(LieodeStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Fail(LieodeStatus::ComputationFailed, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lieode_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lieode_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the normal form of order `n` with `m` components. A null `q`
/// keeps `q(x)` abstract; otherwise it is parsed as a polynomial in `x`.
///
/// # Safety
/// `q` is null or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_system_new(
    n: usize,
    m: usize,
    q: *const c_char,
    out: *mut *mut LieodeSystem,
) -> LieodeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (ring, qpoly, qname) = if q.is_null() {
            (DiffRing::abstract_q(), None, "abstract".to_string())
        } else {
            let src = read_str(q, "q")?;
            let p = XPoly::parse(src)?;
            (DiffRing::polynomial_q(p.clone()), Some(p), src.to_string())
        };
        let sys = normal_form(&ring, n, m)?;
        *out = Box::into_raw(Box::new(LieodeSystem { ring, q: qpoly, qname, sys }));
        Ok(())
    })
}

/// # Safety
/// `sys` is null or a live handle from [`lieode_system_new`].
#[no_mangle]
pub unsafe extern "C" fn lieode_system_free(sys: *mut LieodeSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// `A[j]` of the normal form, `2 <= j <= n`, as a string.
///
/// # Safety
/// `sys` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_system_coefficient(
    sys: *const LieodeSystem,
    j: usize,
    out: *mut *mut c_char,
) -> LieodeStatus {
    guard(|| {
        let s = handle(sys, "sys")?;
        if !(2..=s.sys.n()).contains(&j) {
            return Err(Fail(
                LieodeStatus::InvalidArgument,
                format!("coefficient index {j} outside 2..={}", s.sys.n()),
            ));
        }
        write_string(out, s.sys.a(j).to_string())
    })
}

/// Sets `*out` to whether the named generator (e.g. `"F_p"`, `"S_1,2"`) is a
/// point symmetry of the system.
///
/// # Safety
/// `sys` is a live handle; `label` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_is_symmetry(
    sys: *const LieodeSystem,
    label: *const c_char,
    out: *mut bool,
) -> LieodeStatus {
    guard(|| {
        let s = handle(sys, "sys")?;
        let label = GeneratorLabel::parse(read_str(label, "label")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let field = generators::make(label, s.sys.n(), s.sys.m())?.specialize(&s.ring);
        *out = is_symmetry(&s.ring, &field, &s.sys)?.verdict;
        Ok(())
    })
}

/// Variational and divergence classification as JSON.
///
/// # Safety
/// `sys` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_classify_json(sys: *const LieodeSystem, out: *mut *mut c_char) -> LieodeStatus {
    guard(|| {
        let s = handle(sys, "sys")?;
        let report = classify_algebra(&s.ring, s.sys.n(), s.sys.m())?;
        write_string(out, serde_json::to_string(&report).expect("serializable"))
    })
}

/// Numeric flow check on `[0, 1]` with default tolerances. Requires a
/// polynomial `q`.
///
/// # Safety
/// `sys` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_numcheck_json(sys: *const LieodeSystem, out: *mut *mut c_char) -> LieodeStatus {
    guard(|| {
        let s = handle(sys, "sys")?;
        let q = s.q.clone().ok_or_else(|| {
            Fail(LieodeStatus::InvalidArgument, format!("numeric check needs a polynomial q, got {}", s.qname))
        })?;
        let report = numcheck(&NumcheckConfig::new(s.sys.n(), s.sys.m(), vec![q]))?;
        write_string(out, serde_json::to_string(&report).expect("serializable"))
    })
}

/// Computes the structure constants of the point symmetry basis.
///
/// # Safety
/// `sys` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_presentation_new(
    sys: *const LieodeSystem,
    out: *mut *mut LieodePresentation,
) -> LieodeStatus {
    guard(|| {
        let s = handle(sys, "sys")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (n, m) = (s.sys.n(), s.sys.m());
        let pres = liealg::presentation(&s.ring, n, m)?;
        *out = Box::into_raw(Box::new(LieodePresentation { n, m, pres }));
        Ok(())
    })
}

/// # Safety
/// `pres` is null or a live handle from [`lieode_presentation_new`].
#[no_mangle]
pub unsafe extern "C" fn lieode_presentation_free(pres: *mut LieodePresentation) {
    if !pres.is_null() {
        drop(Box::from_raw(pres));
    }
}

/// # Safety
/// `pres` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_presentation_dim(pres: *const LieodePresentation, out: *mut usize) -> LieodeStatus {
    guard(|| {
        let p = handle(pres, "pres")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.pres.dim();
        Ok(())
    })
}

/// Bracket table as JSON: `{"basis": [...], "brackets": [{"i", "j", "terms"}]}`.
///
/// # Safety
/// `pres` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_presentation_table_json(
    pres: *const LieodePresentation,
    out: *mut *mut c_char,
) -> LieodeStatus {
    guard(|| {
        let p = handle(pres, "pres")?;
        write_string(out, p.pres.to_json().to_string())
    })
}

/// Levi decomposition certificate as JSON. Only defined for `n >= 3`.
///
/// # Safety
/// `pres` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lieode_levi_json(pres: *const LieodePresentation, out: *mut *mut c_char) -> LieodeStatus {
    guard(|| {
        let p = handle(pres, "pres")?;
        if p.n < 3 {
            return Err(Fail(LieodeStatus::InvalidArgument, "Levi certificate needs n >= 3".into()));
        }
        let report = liealg::certify_levi(&p.pres, p.n, p.m);
        write_string(out, serde_json::to_string(&report).expect("serializable"))
    })
}
