//! C ABI for the Drinfeld level-structure library.
//!
//! Handles are opaque pointers owned by the caller via the matching
//! `_free` functions. Every fallible call returns a `DlStatus`; on failure
//! a thread-local message is readable with `dl_last_error`. Elements cross
//! the boundary as flat little-endian F_p coordinate arrays in the
//! canonical bases, and whole experiments run through a JSON config with
//! `dl_run_experiment`, mirroring the CLI.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::sync::Arc;

use drinfeld_core::algebra::ArtinLocalAlgebra;
use drinfeld_core::config::ExperimentConfig;
use drinfeld_core::drinfeld::DrinfeldModule;
use drinfeld_core::{evidence, APoly};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    MathError = 3,
    BadUtf8 = 4,
    BadJson = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DlStatus, msg: impl std::fmt::Display) -> DlStatus {
    set_error(msg.to_string());
    status
}

/// The most recent error message on this thread, or NULL if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Opaque base-ring handle: B = F_{q^m}[Y]/(Y^k), q = p^s.
pub struct DlAlgebra {
    inner: Arc<ArtinLocalAlgebra>,
}

/// Opaque Drinfeld-module handle.
pub struct DlModule {
    inner: DrinfeldModule,
}

/// Create a base ring. On success writes a handle to `out`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_algebra_new(
    p: u64,
    s: usize,
    m: usize,
    k: usize,
    out: *mut *mut DlAlgebra,
) -> DlStatus {
    if out.is_null() {
        return fail(DlStatus::NullPointer, "out is NULL");
    }
    match ArtinLocalAlgebra::new(p, s, m, k) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DlAlgebra { inner }));
            DlStatus::Ok
        }
        Err(e) => fail(DlStatus::InvalidArgument, e),
    }
}

/// # Safety
/// `alg` must be a live handle from `dl_algebra_new` or NULL.
#[no_mangle]
pub unsafe extern "C" fn dl_algebra_free(alg: *mut DlAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Number of elements of the base ring; 0 if `alg` is NULL.
///
/// # Safety
/// `alg` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dl_algebra_cardinality(alg: *const DlAlgebra) -> u64 {
    if alg.is_null() {
        return 0;
    }
    (*alg).inner.cardinality()
}

/// Number of F_p coordinates per element (s*m*k).
///
/// # Safety
/// `alg` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dl_algebra_coord_len(alg: *const DlAlgebra) -> usize {
    if alg.is_null() {
        return 0;
    }
    let a = &(*alg).inner;
    a.ground().s() * a.dim()
}

/// Create a Drinfeld module from `num_coeffs` coefficient vectors
/// gamma(T), c_1, .., c_N, each of `dl_algebra_coord_len` flat F_p
/// coordinates, concatenated in `coeffs`.
///
/// # Safety
/// `alg` must be a live handle; `coeffs` must point to
/// `num_coeffs * dl_algebra_coord_len(alg)` readable u64 values; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_module_new(
    alg: *const DlAlgebra,
    coeffs: *const u64,
    num_coeffs: usize,
    out: *mut *mut DlModule,
) -> DlStatus {
    if alg.is_null() || coeffs.is_null() || out.is_null() {
        return fail(DlStatus::NullPointer, "NULL argument");
    }
    let a = &(*alg).inner;
    let len = a.ground().s() * a.dim();
    if num_coeffs < 2 {
        return fail(
            DlStatus::InvalidArgument,
            "need gamma(T) and at least one higher coefficient",
        );
    }
    let flat = std::slice::from_raw_parts(coeffs, num_coeffs * len);
    let mut elems = flat.chunks(len).map(|c| a.from_fp_coords(c));
    let gamma = elems.next().expect("num_coeffs >= 2");
    let higher: Vec<_> = elems.collect();
    match DrinfeldModule::new(a.clone(), gamma, higher) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DlModule { inner }));
            DlStatus::Ok
        }
        Err(e) => fail(DlStatus::MathError, e),
    }
}

/// # Safety
/// `module` must be a live handle from `dl_module_new` or NULL.
#[no_mangle]
pub unsafe extern "C" fn dl_module_free(module: *mut DlModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Rank of the module; 0 if `module` is NULL.
///
/// # Safety
/// `module` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dl_module_rank(module: *const DlModule) -> usize {
    if module.is_null() {
        return 0;
    }
    (*module).inner.rank()
}

/// Evaluate e_a at a point. `a_coeffs` holds deg(a)+1 F_p scalar lists of
/// length s (ascending powers of T); `point` and `result` hold
/// `dl_algebra_coord_len` coordinates each.
///
/// # Safety
/// All pointers must be valid for the documented lengths.
#[no_mangle]
pub unsafe extern "C" fn dl_module_eval(
    module: *const DlModule,
    a_coeffs: *const u64,
    a_len: usize,
    point: *const u64,
    result: *mut u64,
) -> DlStatus {
    if module.is_null() || a_coeffs.is_null() || point.is_null() || result.is_null() {
        return fail(DlStatus::NullPointer, "NULL argument");
    }
    let e = &(*module).inner;
    let alg = e.algebra();
    let g = alg.ground();
    let coord_len = g.s() * alg.dim();
    let a_flat = std::slice::from_raw_parts(a_coeffs, a_len * g.s());
    let a = APoly::from_coeffs(g, a_flat.chunks(g.s()).map(|c| c.to_vec()).collect());
    let x = alg.from_fp_coords(std::slice::from_raw_parts(point, coord_len));
    match e.e_of(&a) {
        Ok(ea) => {
            let v = alg.fp_coords(&ea.eval(&x));
            std::slice::from_raw_parts_mut(result, coord_len).copy_from_slice(&v);
            DlStatus::Ok
        }
        Err(err) => fail(DlStatus::MathError, err),
    }
}

/// Run a whole experiment: `command` is one of "torsion", "equivalence",
/// "tangent", "isogeny"; `config_json` is the same JSON document the CLI
/// takes. On success `*out_json` holds the evidence record (JSON), to be
/// released with `dl_string_free`, and `*out_passed` (if non-NULL) is 1
/// when all assertions passed.
///
/// # Safety
/// `command` and `config_json` must be NUL-terminated strings; `out_json`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_run_experiment(
    command: *const c_char,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
    out_passed: *mut i32,
) -> DlStatus {
    if command.is_null() || config_json.is_null() || out_json.is_null() {
        return fail(DlStatus::NullPointer, "NULL argument");
    }
    let command = match CStr::from_ptr(command).to_str() {
        Ok(s) => s,
        Err(e) => return fail(DlStatus::BadUtf8, e),
    };
    if !matches!(command, "torsion" | "equivalence" | "tangent" | "isogeny") {
        return fail(
            DlStatus::InvalidArgument,
            format!("unknown command {command:?}"),
        );
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(s) => s,
        Err(e) => return fail(DlStatus::BadUtf8, e),
    };
    let cfg = match ExperimentConfig::from_json(text) {
        Ok(c) => c,
        Err(e) => return fail(DlStatus::BadJson, e),
    };
    match evidence::run(command, &cfg) {
        Ok(record) => {
            let json = record.to_json();
            let c = CString::new(json).expect("JSON has no interior NUL");
            *out_json = c.into_raw();
            if !out_passed.is_null() {
                *out_passed = record.passed() as i32;
            }
            DlStatus::Ok
        }
        Err(e) => fail(DlStatus::MathError, e),
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_and_module_lifecycle() {
        unsafe {
            let mut alg: *mut DlAlgebra = std::ptr::null_mut();
            assert_eq!(dl_algebra_new(2, 1, 1, 2, &mut alg), DlStatus::Ok);
            assert_eq!(dl_algebra_cardinality(alg), 4);
            assert_eq!(dl_algebra_coord_len(alg), 2);

            // Carlitz gamma(T) = Y: coefficients [gamma, c_1] = [[0,1],[1,0]]
            let coeffs = [0u64, 1, 1, 0];
            let mut module: *mut DlModule = std::ptr::null_mut();
            assert_eq!(
                dl_module_new(alg, coeffs.as_ptr(), 2, &mut module),
                DlStatus::Ok
            );
            assert_eq!(dl_module_rank(module), 1);

            // e_T(Y) = Y*Y + Y^2 = 0
            let a = [0u64, 1]; // T
            let point = [0u64, 1]; // Y
            let mut result = [9u64, 9];
            assert_eq!(
                dl_module_eval(module, a.as_ptr(), 2, point.as_ptr(), result.as_mut_ptr()),
                DlStatus::Ok
            );
            assert_eq!(result, [0, 0]);

            dl_module_free(module);
            dl_algebra_free(alg);
        }
    }

    #[test]
    fn invalid_inputs_set_errors() {
        unsafe {
            let mut alg: *mut DlAlgebra = std::ptr::null_mut();
            assert_eq!(dl_algebra_new(4, 1, 1, 1, &mut alg), DlStatus::InvalidArgument);
            let msg = CStr::from_ptr(dl_last_error()).to_str().unwrap();
            assert!(msg.contains("prime"), "{msg}");
            assert_eq!(
                dl_algebra_new(2, 1, 1, 1, std::ptr::null_mut()),
                DlStatus::NullPointer
            );
        }
    }

    #[test]
    fn run_experiment_roundtrip() {
        let config = CString::new(
            r#"{
            "bases": [{"p": 2, "s": 1, "m": 1, "k": 2}],
            "modules": [{"base": 0, "gamma": [0, 1], "coeffs": [[1, 0]]}],
            "ideals": [{"pi": [[0], [1]], "n": 1}]
        }"#,
        )
        .unwrap();
        let cmd = CString::new("equivalence").unwrap();
        unsafe {
            let mut out: *mut c_char = std::ptr::null_mut();
            let mut passed = 0i32;
            assert_eq!(
                dl_run_experiment(cmd.as_ptr(), config.as_ptr(), &mut out, &mut passed),
                DlStatus::Ok
            );
            assert_eq!(passed, 1);
            let text = CStr::from_ptr(out).to_str().unwrap().to_string();
            dl_string_free(out);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["payload"]["cases"][0]["count_single_ideal"], 1);

            // bad json -> BadJson
            let bad = CString::new("{").unwrap();
            assert_eq!(
                dl_run_experiment(cmd.as_ptr(), bad.as_ptr(), &mut out, std::ptr::null_mut()),
                DlStatus::BadJson
            );
        }
    }
}
