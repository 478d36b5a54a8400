//! C ABI over `qkrall`.
//!
//! Objects cross the boundary as opaque handles; structured results cross
//! as JSON strings owned by the library and released with
//! [`qk_string_free`]. Every call returns a [`QkStatus`]; on failure the
//! message is available from [`qk_last_error`] on the same thread.
//! Configurations use the same JSON keys as the command line.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qkrall::config::RunConfig;
use qkrall::families::PolynomialFamily;
use qkrall::krall::{theorem_catalog, verify_eigen, KrallConstruction, TheoremInstance};
use qkrall::report::{exit_code_for, run_suite, Command};
use qkrall::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Parse failure, degenerate parameters or an unknown name.
    InvalidInput = 3,
    /// A verification ran and failed.
    CheckFailed = 4,
    /// Index outside the computed range.
    OutOfRange = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

/// A polynomial family.
pub struct QkFamily {
    inner: PolynomialFamily,
}

/// A built Krall construction.
pub struct QkConstruction {
    instance: TheoremInstance,
    inner: KrallConstruction,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QkStatus {
    if exit_code_for(e) == qkrall::report::EXIT_CHECK_FAILED {
        QkStatus::CheckFailed
    } else {
        QkStatus::InvalidInput
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QkStatus, String)>) -> QkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QkStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            QkStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (QkStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (QkStatus, String)> {
    if p.is_null() {
        return Err((QkStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QkStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn read_config(p: *const c_char) -> Result<RunConfig, (QkStatus, String)> {
    let cfg = RunConfig::from_json_str(read_str(p)?).map_err(lib_err)?;
    cfg.validate().map_err(lib_err)?;
    Ok(cfg)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (QkStatus, String)> {
    if out.is_null() {
        return Err((QkStatus::NullPointer, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|_| (QkStatus::Internal, "interior nul in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, (QkStatus, String)> {
    serde_json::to_string(v).map_err(|e| (QkStatus::Internal, e.to_string()))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn qk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn qk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a family from a config such as
/// `{"family":"q-meixner","q":"2/5","b":"1/3","c":"3/2"}`.
///
/// # Safety
/// `config_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_family_new(config_json: *const c_char, out: *mut *mut QkFamily) -> QkStatus {
    guard(|| {
        if out.is_null() {
            return Err((QkStatus::NullPointer, "null output pointer".into()));
        }
        let cfg = read_config(config_json)?;
        let inner = cfg.family().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(QkFamily { inner }));
        Ok(())
    })
}

/// Writes `p_n` as a JSON array of `"num/den"` coefficients, lowest degree first.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_family_poly_json(family: *const QkFamily, n: usize, out: *mut *mut c_char) -> QkStatus {
    guard(|| {
        let f = family
            .as_ref()
            .ok_or((QkStatus::NullPointer, "null family".to_string()))?;
        let p = f.inner.poly(n).map_err(lib_err)?;
        write_string(out, json(&p)?)
    })
}

/// # Safety
/// `family` must come from [`qk_family_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qk_family_free(family: *mut QkFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Builds a theorem construction for `n ≤ upto`, e.g. from
/// `{"theorem":"meixner-i","k":2}`.
///
/// # Safety
/// `config_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_construction_new(
    config_json: *const c_char,
    upto: usize,
    out: *mut *mut QkConstruction,
) -> QkStatus {
    guard(|| {
        if out.is_null() {
            return Err((QkStatus::NullPointer, "null output pointer".into()));
        }
        let cfg = read_config(config_json)?;
        let instance = cfg.theorem_instance().map_err(lib_err)?;
        let inner = theorem_catalog(&instance)
            .and_then(|s| s.build(upto))
            .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(QkConstruction { instance, inner }));
        Ok(())
    })
}

/// `P₂, P₁, γ, λ, β, q_n` and `D^Q` as JSON.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_construction_summary_json(c: *const QkConstruction, out: *mut *mut c_char) -> QkStatus {
    guard(|| {
        let c = c.as_ref().ok_or((QkStatus::NullPointer, "null construction".to_string()))?;
        let v = serde_json::json!({
            "instance": c.instance.to_string(),
            "construction": c.inner.summary(),
        });
        write_string(out, json(&v)?)
    })
}

/// `q_n` as a JSON coefficient array.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_construction_q_poly_json(
    c: *const QkConstruction,
    n: usize,
    out: *mut *mut c_char,
) -> QkStatus {
    guard(|| {
        let c = c.as_ref().ok_or((QkStatus::NullPointer, "null construction".to_string()))?;
        let p = c
            .inner
            .q_polys()
            .get(n)
            .ok_or((QkStatus::OutOfRange, format!("q_{n} was not built")))?;
        write_string(out, json(p)?)
    })
}

/// Checks the eigen equation for `n ≤ upto` and the operator order.
/// Returns `QK_STATUS_CHECK_FAILED` when any check fails; `report_out`
/// may be null.
///
/// # Safety
/// `c` must be a live handle; `report_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn qk_construction_verify_eigen(
    c: *const QkConstruction,
    upto: usize,
    report_out: *mut *mut c_char,
) -> QkStatus {
    guard(|| {
        let c = c.as_ref().ok_or((QkStatus::NullPointer, "null construction".to_string()))?;
        let rep = verify_eigen(&c.inner, upto);
        if !report_out.is_null() {
            write_string(report_out, json(&rep)?)?;
        }
        if rep.all_pass() {
            Ok(())
        } else {
            Err((QkStatus::CheckFailed, format!("eigen check failed at n = {:?}", rep.failures())))
        }
    })
}

/// # Safety
/// `c` must come from [`qk_construction_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qk_construction_free(c: *mut QkConstruction) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

fn command_of(name: &str) -> Option<Command> {
    Some(match name {
        "families" => Command::Families,
        "verify-dop" => Command::VerifyDop,
        "build-krall" => Command::BuildKrall,
        "verify-eigen" => Command::VerifyEigen,
        "verify-orthogonality" => Command::VerifyOrthogonality,
        "conjecture-a" => Command::ConjectureA,
        "conjecture-b1" => Command::ConjectureB1,
        "conjecture-b2" => Command::ConjectureB2,
        _ => return None,
    })
}

/// Runs a command-line suite (`"verify-eigen"`, `"conjecture-a"`, ...)
/// and writes its JSON report. `QK_STATUS_CHECK_FAILED` still produces a
/// report.
///
/// # Safety
/// String arguments must be nul-terminated; `report_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_run_suite(
    command: *const c_char,
    config_json: *const c_char,
    report_out: *mut *mut c_char,
) -> QkStatus {
    guard(|| {
        let name = read_str(command)?;
        let cmd = command_of(name).ok_or((QkStatus::InvalidInput, format!("unknown command {name:?}")))?;
        let cfg = read_config(config_json)?;
        let (rep, _) = run_suite(cmd, &cfg).map_err(lib_err)?;
        write_string(report_out, rep.to_json())?;
        if rep.pass {
            Ok(())
        } else {
            Err((QkStatus::CheckFailed, format!("{name}: a check failed")))
        }
    })
}
