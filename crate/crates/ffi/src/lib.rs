//! C ABI over the analysis routines. Inputs and outputs are JSON strings in
//! the same formats as the command-line tool; matrices are passed around as
//! opaque handles.
//!
//! Every call returns a [`PdStatus`]; on failure the message is available
//! from [`pd_last_error`] until the next call on the same thread. Strings
//! returned through out-parameters are owned by the caller and released
//! with [`pd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use padic_distal::linalg::PadicMatrix;
use padic_distal::report;
use padic_distal::semigroup::{semigroup_distality, SemigroupOptions, SemigroupSpec, SemigroupVerdict};
use padic_distal::Error;

/// Opaque matrix over the p-adic numbers with exact rational entries.
pub struct PdMatrix {
    inner: PadicMatrix,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// Semigroup verdicts, matching the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdVerdict {
    Distal = 0,
    NonDistal = 3,
    Inconclusive = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PdStatus {
    match e {
        Error::Parse(_) => PdStatus::Parse,
        _ => PdStatus::Domain,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), (PdStatus, String)>>(f: F) -> PdStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PdStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (PdStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (PdStatus, String)> {
    if s.is_null() {
        return Err((PdStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (PdStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (PdStatus, String)> {
    if out.is_null() {
        return Err((PdStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
    Ok(())
}

fn to_json(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"p", "n", "rows"}` into a new matrix handle.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_matrix_from_json(json: *const c_char, out: *mut *mut PdMatrix) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err((PdStatus::NullPointer, "null output pointer".into()));
        }
        let v = report::parse_json(read_str(json)?).map_err(lib_err)?;
        let inner = report::parse_matrix(&v, None).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PdMatrix { inner }));
        Ok(())
    })
}

/// Releases a matrix handle. Null is ignored.
///
/// # Safety
/// `m` must come from [`pd_matrix_from_json`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn pd_matrix_free(m: *mut PdMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the matrix, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_matrix_dim(m: *const PdMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// The prime of the matrix, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_matrix_prime(m: *const PdMatrix) -> u64 {
    m.as_ref().map_or(0, |m| m.inner.prime().get())
}

/// Linear and projective distality flags (1 distal, 0 not).
///
/// # Safety
/// `m` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pd_matrix_distality(m: *const PdMatrix, linear: *mut i32, projective: *mut i32) -> PdStatus {
    guard(|| {
        let m = m.as_ref().ok_or((PdStatus::NullPointer, "null matrix handle".to_string()))?;
        if linear.is_null() || projective.is_null() {
            return Err((PdStatus::NullPointer, "null output pointer".into()));
        }
        let r = report::analyze(&m.inner, None).map_err(lib_err)?;
        *linear = r.linear.distal as i32;
        *projective = r.projective.distal as i32;
        Ok(())
    })
}

/// Full analysis report as JSON; `split_precision` > 0 adds the spectral
/// splitting computed from that starting precision.
///
/// # Safety
/// `m` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_analyze(m: *const PdMatrix, split_precision: u32, out_json: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let m = m.as_ref().ok_or((PdStatus::NullPointer, "null matrix handle".to_string()))?;
        let r = report::analyze(&m.inner, (split_precision > 0).then_some(split_precision)).map_err(lib_err)?;
        write_string(out_json, to_json(&serde_json::to_value(&r).expect("report serializes")))
    })
}

/// Semigroup distality from `{"p", "n", "generators"}`; writes the verdict
/// code and the JSON report.
///
/// # Safety
/// `json` must be a valid nul-terminated string; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pd_semigroup(
    json: *const c_char,
    seed: u64,
    verdict: *mut PdVerdict,
    out_json: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        if verdict.is_null() {
            return Err((PdStatus::NullPointer, "null output pointer".into()));
        }
        let v = report::parse_json(read_str(json)?).map_err(lib_err)?;
        let spec = SemigroupSpec::new(report::parse_generators(&v, None).map_err(lib_err)?).map_err(lib_err)?;
        let opts = SemigroupOptions { seed, ..SemigroupOptions::default() };
        let result = semigroup_distality(&spec, &opts).map_err(lib_err)?;
        let out = report::semigroup_json(&result).map_err(lib_err)?;
        write_string(out_json, to_json(&out))?;
        *verdict = match result {
            SemigroupVerdict::Distal { .. } => PdVerdict::Distal,
            SemigroupVerdict::NonDistal(_) => PdVerdict::NonDistal,
            SemigroupVerdict::Inconclusive(_) => PdVerdict::Inconclusive,
        };
        Ok(())
    })
}

/// Non-distal pair for an affine perturbation of the SD form
/// `{"p", "n", "T", "m", "S", "d_exponents"}`, verified for `k_max` periods.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_witness(json: *const c_char, k_max: u64, out_json: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let v = report::parse_json(read_str(json)?).map_err(lib_err)?;
        let f = report::parse_sdform(&v, None).map_err(lib_err)?;
        let w = report::witness_json(&f, None, k_max.max(1)).map_err(lib_err)?;
        write_string(out_json, to_json(&w))
    })
}

/// Safe translation radius of an SD form as JSON.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_safe_radius(json: *const c_char, out_json: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let v = report::parse_json(read_str(json)?).map_err(lib_err)?;
        let f = report::parse_sdform(&v, None).map_err(lib_err)?;
        write_string(out_json, to_json(&report::safe_radius_json(&f).map_err(lib_err)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn handle_round_trip() {
        let json = CString::new(r#"{"p": 3, "n": 2, "rows": [["3", "0"], ["0", "1/3"]]}"#).unwrap();
        let mut m = ptr::null_mut();
        unsafe {
            assert_eq!(pd_matrix_from_json(json.as_ptr(), &mut m), PdStatus::Ok);
            assert_eq!((pd_matrix_dim(m), pd_matrix_prime(m)), (2, 3));
            let (mut lin, mut proj) = (7, 7);
            assert_eq!(pd_matrix_distality(m, &mut lin, &mut proj), PdStatus::Ok);
            assert_eq!((lin, proj), (0, 0));
            pd_matrix_free(m);
        }
    }
}
