//! C ABI for `cmeis`. Setups are opaque handles; results come back as
//! NUL-terminated JSON owned by the library and released with
//! [`cmeis_string_free`]. Every function returns a [`CmeisStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`cmeis_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cmeis::field::Setup;
use cmeis::oracle::singular_moduli_check;
use cmeis::record::{degree_record, holomorphic_records, write_json_lines, Display};
use cmeis::verify::{self, Options, Suite};
use cmeis::Error;

/// Status codes. The first four match the exit codes of the `cmeis` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmeisStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidSetup = 2,
    PrecisionFailure = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Opaque handle to a validated pair of discriminants.
pub struct CmeisSetup {
    inner: Setup,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CmeisStatus {
    match e {
        Error::InsufficientPrecision(_) => CmeisStatus::PrecisionFailure,
        Error::Inconsistent(_) => CmeisStatus::VerificationFailed,
        _ => CmeisStatus::InvalidSetup,
    }
}

/// Runs `f`, recording errors and converting panics to `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (CmeisStatus, String)>) -> CmeisStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CmeisStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CmeisStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (CmeisStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CmeisStatus, String) {
    (CmeisStatus::NullPointer, format!("{what} is null"))
}

unsafe fn setup_ref<'a>(setup: *const CmeisSetup) -> Result<&'a Setup, (CmeisStatus, String)> {
    setup.as_ref().map(|s| &s.inner).ok_or_else(|| null("setup"))
}

unsafe fn emit(out: *mut *mut c_char, text: String) -> Result<(), (CmeisStatus, String)> {
    let c = CString::new(text).map_err(|e| (CmeisStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Validates `(d1, d2)` and stores a new handle in `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cmeis_setup_new(d1: i64, d2: i64, out: *mut *mut CmeisSetup) -> CmeisStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = Setup::new(d1, d2).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CmeisSetup { inner }));
        Ok(())
    })
}

/// Releases a handle from [`cmeis_setup_new`]. Null is ignored.
///
/// # Safety
/// `setup` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmeis_setup_free(setup: *mut CmeisSetup) {
    if !setup.is_null() {
        drop(Box::from_raw(setup));
    }
}

/// Writes `D = d1 d2` to `*out`.
///
/// # Safety
/// `setup` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cmeis_setup_field_discriminant(setup: *const CmeisSetup, out: *mut i64) -> CmeisStatus {
    guard(|| {
        let s = setup_ref(setup)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.big_d();
        Ok(())
    })
}

/// Coefficient records for traces `1..=trace_max` as JSON Lines.
///
/// # Safety
/// `setup` must be a live handle and `out` valid for writing. The string
/// stored in `*out` must be released with [`cmeis_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cmeis_coefficients_json(
    setup: *const CmeisSetup,
    trace_max: i64,
    digits: u32,
    out: *mut *mut c_char,
) -> CmeisStatus {
    guard(|| {
        let s = setup_ref(setup)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let display = display(digits)?;
        let records = holomorphic_records(s, trace_max, display).map_err(lib_err)?;
        let mut buf = Vec::new();
        write_json_lines(&mut buf, &records).map_err(lib_err)?;
        emit(out, String::from_utf8(buf).map_err(|e| (CmeisStatus::Internal, e.to_string()))?)
    })
}

fn display(digits: u32) -> Result<Display, (CmeisStatus, String)> {
    match digits {
        0 => Ok(Display::default()),
        1..=1000 => Ok(Display { digits: digits as usize }),
        _ => Err((CmeisStatus::InvalidSetup, format!("digits {digits} out of range"))),
    }
}

/// `deg T_m` as a JSON object. `digits = 0` selects the default of 30.
///
/// # Safety
/// As for [`cmeis_coefficients_json`].
#[no_mangle]
pub unsafe extern "C" fn cmeis_degree_json(
    setup: *const CmeisSetup,
    m: i64,
    digits: u32,
    out: *mut *mut c_char,
) -> CmeisStatus {
    guard(|| {
        let s = setup_ref(setup)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = degree_record(s, m, display(digits)?).map_err(lib_err)?;
        emit(out, serde_json::to_string(&r).map_err(|e| (CmeisStatus::Internal, e.to_string()))?)
    })
}

/// The singular-moduli report as a JSON object. `precision_bits = 0` picks the
/// starting precision from the class groups. The report is written even when
/// the identity fails, in which case the status is `VerificationFailed`.
///
/// # Safety
/// As for [`cmeis_coefficients_json`].
#[no_mangle]
pub unsafe extern "C" fn cmeis_singular_moduli_json(
    setup: *const CmeisSetup,
    precision_bits: u32,
    out: *mut *mut c_char,
) -> CmeisStatus {
    guard(|| {
        let s = setup_ref(setup)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let precision = (precision_bits != 0).then_some(precision_bits);
        let r = singular_moduli_check(s, precision).map_err(lib_err)?;
        emit(out, serde_json::to_string(&r).map_err(|e| (CmeisStatus::Internal, e.to_string()))?)?;
        if r.passed {
            Ok(())
        } else {
            Err((CmeisStatus::VerificationFailed, format!("deg T_1 = {} but rhs = {}", r.lhs, r.rhs)))
        }
    })
}

/// Runs a verification suite by name (`arith`, `field`, `genus`,
/// `eisenstein`, `oracle` or `all`).
///
/// # Safety
/// `suite` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cmeis_verify(suite: *const c_char, seed: u64) -> CmeisStatus {
    guard(|| {
        if suite.is_null() {
            return Err(null("suite"));
        }
        let name = CStr::from_ptr(suite).to_str().map_err(|e| (CmeisStatus::InvalidSetup, e.to_string()))?;
        let suite: Suite = name.parse().map_err(lib_err)?;
        let report = verify::run(suite, &Options { seed, ..Options::default() });
        let first =
            report.failures().next().map(|o| format!("{}: {}", o.invariant, o.failure.as_deref().unwrap_or_default()));
        match first {
            None => Ok(()),
            Some(msg) => Err((CmeisStatus::VerificationFailed, msg)),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmeis_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cmeis_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cmeis_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn invalid_setup_sets_message() {
        let mut h = ptr::null_mut();
        let st = unsafe { cmeis_setup_new(-3, -12, &mut h) };
        assert_eq!(st, CmeisStatus::InvalidSetup);
        assert!(h.is_null());
        let msg = unsafe { CStr::from_ptr(cmeis_last_error()) }.to_str().unwrap();
        assert!(msg.contains("-12"), "{msg}");
    }

    #[test]
    fn null_pointers_are_reported() {
        assert_eq!(unsafe { cmeis_setup_new(-3, -7, ptr::null_mut()) }, CmeisStatus::NullPointer);
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { cmeis_degree_json(ptr::null(), 1, 0, &mut out) }, CmeisStatus::NullPointer);
        assert_eq!(unsafe { cmeis_verify(ptr::null(), 1) }, CmeisStatus::NullPointer);
    }
}
