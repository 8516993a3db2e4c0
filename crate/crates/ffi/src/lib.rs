//! C interface to blochlab.
//!
//! Rings are opaque handles released with `bl_ring_free`. Results come back
//! as JSON strings owned by the caller and released with `bl_string_free`.
//! Every call returns a `BlStatus`; on anything but `BL_STATUS_OK` a message
//! is available from `bl_last_error` until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use blochlab::report::{Job, TOOL};
use blochlab::rings::FiniteRing;
use blochlab::suites::{Outcome, Suite, SuiteConfig, Verdict};
use blochlab::Error;

/// Result codes. The numeric values match the command-line exit codes where
/// both exist.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlStatus {
    Ok = 0,
    /// A verification ran and failed, or was inconclusive.
    Fail = 1,
    /// A spec, suite name or argument did not parse.
    Parse = 2,
    /// A budget was exceeded.
    Budget = 3,
    NullArgument = 4,
    /// A panic or other internal error.
    Internal = 5,
}

/// A built finite ring.
pub struct BlRing {
    ring: Arc<FiniteRing>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).expect("nul bytes removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BlStatus {
    match e {
        Error::Parse(_) | Error::InvalidSpec(_) => BlStatus::Parse,
        Error::Budget { .. } => BlStatus::Budget,
        _ => BlStatus::Internal,
    }
}

fn status_of_verdict(v: Verdict) -> BlStatus {
    match v {
        Verdict::Pass => BlStatus::Ok,
        Verdict::Fail | Verdict::Inconclusive => BlStatus::Fail,
        Verdict::Budget => BlStatus::Budget,
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error.
fn guard(f: impl FnOnce() -> Result<BlStatus, (BlStatus, String)>) -> BlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            BlStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (BlStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (BlStatus, String)> {
    if p.is_null() {
        return Err((BlStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (BlStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write_str(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
}

fn check_out<T>(out: *mut T) -> Result<(), (BlStatus, String)> {
    if out.is_null() {
        Err((BlStatus::NullArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Writes the outcome as JSON and maps its verdict to a status.
unsafe fn finish(outcome: Outcome, out: *mut *mut c_char) -> Result<BlStatus, (BlStatus, String)> {
    let status = status_of_verdict(outcome.verdict);
    if status != BlStatus::Ok {
        set_error(outcome.summary.clone());
    }
    write_str(out, serde_json::to_string(&outcome).expect("outcome serializes"));
    Ok(status)
}

/// Tool name and version, a static string.
#[no_mangle]
pub extern "C" fn bl_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!("blochlab ", env!("CARGO_PKG_VERSION"), "\0").as_bytes())
    {
        Ok(s) => s,
        Err(_) => panic!("version has no interior nul"),
    };
    debug_assert_eq!(V.to_str().ok(), Some(TOOL));
    V.as_ptr()
}

/// Message for the last failing call on this thread, or null.
#[no_mangle]
pub extern "C" fn bl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and builds a ring such as `gf:4` or `zmod:9`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_ring_new(spec: *const c_char, out: *mut *mut BlRing) -> BlStatus {
    guard(|| {
        check_out(out)?;
        let s = read_str(spec, "spec")?;
        let ring = blochlab::rings::ring(s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BlRing { ring }));
        Ok(BlStatus::Ok)
    })
}

/// # Safety
/// `ring` must come from `bl_ring_new` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bl_ring_free(ring: *mut BlRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `ring` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_ring_size(ring: *const BlRing) -> usize {
    ring.as_ref().map_or(0, |r| r.ring.size())
}

/// Number of units, or 0 for a null handle.
///
/// # Safety
/// `ring` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_ring_unit_count(ring: *const BlRing) -> usize {
    ring.as_ref().map_or(0, |r| r.ring.units().len())
}

/// Full Bloch-group report for a ring, as JSON. Returns `Fail` when some
/// certificate fails; the JSON is written either way.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_bloch_report(ring: *const BlRing, out: *mut *mut c_char) -> BlStatus {
    guard(|| {
        check_out(out)?;
        let r = ring
            .as_ref()
            .ok_or((BlStatus::NullArgument, "ring is null".to_string()))?;
        let rep = blochlab::bloch::bw_report(&r.ring).map_err(lib_err)?;
        let status = if rep.all_pass() { BlStatus::Ok } else { BlStatus::Fail };
        write_str(out, serde_json::to_string(&rep).expect("report serializes"));
        Ok(status)
    })
}

fn budgets(tuple_budget: u64, solve_budget: u64, max_torus: usize, seed: u64) -> SuiteConfig {
    let d = SuiteConfig::default();
    SuiteConfig {
        tuple_budget: if tuple_budget == 0 {
            d.tuple_budget
        } else {
            tuple_budget
        },
        solve_budget: if solve_budget == 0 {
            d.solve_budget
        } else {
            solve_budget
        },
        max_torus: if max_torus == 0 { d.max_torus } else { max_torus },
        seed,
    }
}

/// Runs one suite on one target and writes `{verdict, summary, certificate}`.
/// Zero budgets select the defaults.
///
/// # Safety
/// `suite` and `target` must be nul-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_verify(
    suite: *const c_char,
    target: *const c_char,
    tuple_budget: u64,
    solve_budget: u64,
    max_torus: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> BlStatus {
    guard(|| {
        check_out(out)?;
        let suite: Suite = read_str(suite, "suite")?.parse().map_err(lib_err)?;
        let target = read_str(target, "target")?.to_string();
        let job = Job::Verify { suite, target };
        job.validate().map_err(lib_err)?;
        let outcome = job
            .run(&budgets(tuple_budget, solve_budget, max_torus, seed))
            .map_err(lib_err)?;
        finish(outcome, out)
    })
}

/// Homology of a group spec in one degree, with `Z/modulus` coefficients or
/// integral ones when `modulus` is 0.
///
/// # Safety
/// `group` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_homology(
    group: *const c_char,
    degree: usize,
    modulus: u64,
    tuple_budget: u64,
    out: *mut *mut c_char,
) -> BlStatus {
    guard(|| {
        check_out(out)?;
        let job = Job::Homology {
            group: read_str(group, "group")?.to_string(),
            degree,
            modulus: (modulus != 0).then_some(modulus),
        };
        job.validate().map_err(lib_err)?;
        let outcome = job.run(&budgets(tuple_budget, 0, 0, 0)).map_err(lib_err)?;
        finish(outcome, out)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(p: *mut c_char) -> serde_json::Value {
        let v = serde_json::from_str(CStr::from_ptr(p).to_str().unwrap()).unwrap();
        bl_string_free(p);
        v
    }

    #[test]
    fn ring_handles() {
        unsafe {
            let mut r = ptr::null_mut();
            assert_eq!(bl_ring_new(c("gf:4").as_ptr(), &mut r), BlStatus::Ok);
            assert_eq!(bl_ring_size(r), 4);
            assert_eq!(bl_ring_unit_count(r), 3);
            let mut out = ptr::null_mut();
            assert_eq!(bl_bloch_report(r, &mut out), BlStatus::Ok);
            let v = take(out);
            assert_eq!(v["ring"], "gf:4");
            bl_ring_free(r);
            assert_eq!(bl_ring_size(ptr::null()), 0);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let mut r = ptr::null_mut();
            assert_eq!(bl_ring_new(c("gf:banana").as_ptr(), &mut r), BlStatus::Parse);
            assert!(r.is_null());
            let msg = CStr::from_ptr(bl_last_error()).to_str().unwrap();
            assert!(msg.contains("banana"), "{msg}");
            assert_eq!(bl_ring_new(ptr::null(), &mut r), BlStatus::NullArgument);
            assert_eq!(bl_ring_new(c("gf:4").as_ptr(), ptr::null_mut()), BlStatus::NullArgument);
            let mut out = ptr::null_mut();
            assert_eq!(
                bl_verify(c("lemma99").as_ptr(), c("gf:4").as_ptr(), 0, 0, 0, 1, &mut out),
                BlStatus::Parse
            );
            assert!(out.is_null());
            assert_eq!(bl_ring_new(c("gf:4").as_ptr(), &mut r), BlStatus::Ok);
            assert!(bl_last_error().is_null());
            bl_ring_free(r);
        }
    }

    #[test]
    fn verify_and_homology() {
        unsafe {
            let mut out = ptr::null_mut();
            assert_eq!(
                bl_verify(c("lemma11").as_ptr(), c("gf:5").as_ptr(), 0, 0, 0, 1, &mut out),
                BlStatus::Ok
            );
            assert_eq!(take(out)["certificate"]["pairs"], 6);
            assert_eq!(bl_homology(c("gl2:gf:2").as_ptr(), 3, 0, 0, &mut out), BlStatus::Ok);
            assert_eq!(take(out)["certificate"]["invariant_factors"], serde_json::json!([6]));
            assert_eq!(bl_homology(c("gl2:gf:4").as_ptr(), 3, 0, 0, &mut out), BlStatus::Budget);
            assert_eq!(take(out)["verdict"], "budget");
            assert_eq!(
                bl_verify(c("lemma53").as_ptr(), c("gf:7").as_ptr(), 0, 0, 16, 1, &mut out),
                BlStatus::Budget
            );
            bl_string_free(out);
        }
    }

    #[test]
    fn version_string() {
        let v = unsafe { CStr::from_ptr(bl_version()) };
        assert_eq!(v.to_str().unwrap(), TOOL);
    }
}
