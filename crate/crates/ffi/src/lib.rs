//! C ABI for the unitary-integration library.
//!
//! Conventions: scenario and run objects are opaque handles created and
//! destroyed by this library.  Fallible calls return an `int32_t` status
//! (zero is success, see the `UNITINT_*` constants); constructors return
//! null on failure.  After any failure the calling thread can fetch a
//! human-readable message from [`unitint_last_error_message`]; the pointer
//! stays valid until the next failing call on the same thread.
//!
//! Every result buffer is owned by its run handle and remains valid until
//! [`unitint_run_free`] releases it.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use unitint::cli::{run_scenario, run_table_export, run_verify, ScenarioConfig, ScenarioRun};
use unitint::Error;

/// Success.
pub const UNITINT_OK: i32 = 0;
/// The operation ran but reported a failure (failing verification checks,
/// or a run whose oracle deviation exceeds the flag threshold).
pub const UNITINT_ERR_FAILURE: i32 = 1;
/// Invalid configuration or arguments (null pointers, bad UTF-8, unknown
/// preset names, malformed config files).
pub const UNITINT_ERR_CONFIG: i32 = 2;
/// Numerical or I/O failure while running.
pub const UNITINT_ERR_RUNTIME: i32 = 3;
/// An internal invariant was violated (a bug; the message has details).
pub const UNITINT_ERR_PANIC: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn code_of(err: &Error) -> i32 {
    match err.exit_code() {
        2 => UNITINT_ERR_CONFIG,
        _ => UNITINT_ERR_RUNTIME,
    }
}

/// Run `f` with panics converted into `UNITINT_ERR_PANIC`.
fn guarded(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_error(&format!("internal panic: {msg}"));
            UNITINT_ERR_PANIC
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error(&format!("{what} must not be null"));
        return Err(UNITINT_ERR_CONFIG);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error(&format!("{what} is not valid UTF-8"));
            Err(UNITINT_ERR_CONFIG)
        }
    }
}

/// Opaque scenario configuration handle.
pub struct UnitintScenario {
    cfg: ScenarioConfig,
}

/// Opaque finished-run handle owning all result buffers.
pub struct UnitintRun {
    x: Vec<f64>,
    diagonals: Vec<f64>,
    offdiag_re: Vec<f64>,
    offdiag_im: Vec<f64>,
    entropy: Vec<f64>,
    run: ScenarioRun,
}

impl UnitintRun {
    fn new(run: ScenarioRun) -> Self {
        let x = run.x.clone();
        let diagonals = run.diagonals.iter().flatten().copied().collect();
        let offdiag_re = run.offdiag_re.iter().flatten().copied().collect();
        let offdiag_im = run.offdiag_im.iter().flatten().copied().collect();
        let entropy = run.entropy.clone();
        UnitintRun {
            x,
            diagonals,
            offdiag_re,
            offdiag_im,
            entropy,
            run,
        }
    }
}

/// Most recent failure message for the calling thread (never null; empty
/// before the first failure).  Valid until the next failing call here.
#[no_mangle]
pub extern "C" fn unitint_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// New scenario with the default configuration.  Never fails.
#[no_mangle]
pub extern "C" fn unitint_scenario_new() -> *mut UnitintScenario {
    Box::into_raw(Box::new(UnitintScenario {
        cfg: ScenarioConfig::default(),
    }))
}

/// New scenario from a named preset (`fig1-3`, `fig4-6`, `fig7-9`).
/// Returns null on an unknown name.
///
/// # Safety
/// `name` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_preset(name: *const c_char) -> *mut UnitintScenario {
    let Ok(name) = (unsafe { str_arg(name, "preset name") }) else {
        return std::ptr::null_mut();
    };
    match ScenarioConfig::preset(name) {
        Ok(cfg) => Box::into_raw(Box::new(UnitintScenario { cfg })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// New scenario parsed and validated from a TOML file.  Returns null on
/// parse or validation errors.
///
/// # Safety
/// `path` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_from_file(path: *const c_char) -> *mut UnitintScenario {
    let Ok(path) = (unsafe { str_arg(path, "config path") }) else {
        return std::ptr::null_mut();
    };
    match ScenarioConfig::load(Path::new(path)) {
        Ok(cfg) => Box::into_raw(Box::new(UnitintScenario { cfg })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `scenario` must be null or a live handle from a scenario constructor.
unsafe fn set_field(
    scenario: *mut UnitintScenario,
    apply: impl FnOnce(&mut ScenarioConfig),
) -> i32 {
    let Some(s) = (unsafe { scenario.as_mut() }) else {
        set_error("scenario handle must not be null");
        return UNITINT_ERR_CONFIG;
    };
    apply(&mut s.cfg);
    match s.cfg.validate() {
        Ok(()) => UNITINT_OK,
        Err(e) => {
            set_error(&e.to_string());
            code_of(&e)
        }
    }
}

/// Set the uniform damping rate (1/ns); must be finite and nonnegative.
///
/// # Safety
/// `scenario` must be a live handle from a scenario constructor.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_set_gamma(
    scenario: *mut UnitintScenario,
    value: f64,
) -> i32 {
    unsafe { set_field(scenario, |cfg| cfg.gamma_ghz = value) }
}

/// Set the phase offset (radians) of the first junction drive.
///
/// # Safety
/// `scenario` must be a live handle from a scenario constructor.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_set_delta(
    scenario: *mut UnitintScenario,
    value: f64,
) -> i32 {
    unsafe { set_field(scenario, |cfg| cfg.delta_rad = value) }
}

/// Set the adaptive solver tolerance; must be positive.
///
/// # Safety
/// `scenario` must be a live handle from a scenario constructor.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_set_solver_tol(
    scenario: *mut UnitintScenario,
    value: f64,
) -> i32 {
    unsafe { set_field(scenario, |cfg| cfg.solver_tol = value) }
}

/// Release a scenario handle; a null pointer is ignored.
///
/// # Safety
/// `scenario` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_free(scenario: *mut UnitintScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Run a scenario: integrate the evolution, cross-check it against the
/// brute-force propagator, and evolve the observables.  On success stores
/// a new run handle in `*out` and returns zero; `UNITINT_ERR_FAILURE`
/// means the run finished but its oracle deviation exceeded the accuracy
/// flag (the handle is still stored for inspection).
///
/// # Safety
/// `scenario` must be a live scenario handle; `out` must point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn unitint_scenario_run(
    scenario: *const UnitintScenario,
    out: *mut *mut UnitintRun,
) -> i32 {
    guarded(|| {
        let Some(s) = (unsafe { scenario.as_ref() }) else {
            set_error("scenario handle must not be null");
            return UNITINT_ERR_CONFIG;
        };
        if out.is_null() {
            set_error("output pointer must not be null");
            return UNITINT_ERR_CONFIG;
        }
        match run_scenario(&s.cfg) {
            Ok(run) => {
                let ok = run.report.deviation_within_bound;
                if !ok {
                    set_error(&format!(
                        "oracle deviation {:.3e} exceeds the accuracy flag",
                        run.report.oracle_max_deviation
                    ));
                }
                unsafe { out.write(Box::into_raw(Box::new(UnitintRun::new(run)))) };
                if ok {
                    UNITINT_OK
                } else {
                    UNITINT_ERR_FAILURE
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}

/// # Safety
/// `run` must be null or a live run handle.
unsafe fn run_buffer(
    run: *const UnitintRun,
    pick: impl FnOnce(&UnitintRun) -> &[f64],
) -> *const f64 {
    match unsafe { run.as_ref() } {
        Some(r) => pick(r).as_ptr(),
        None => std::ptr::null(),
    }
}

/// Sample positions in modulation cycles (length `unitint_run_len`).
/// Returns null if `run` is null.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_x(run: *const UnitintRun) -> *const f64 {
    unsafe { run_buffer(run, |r| &r.x) }
}

/// Density-matrix diagonals, row-major `len x 4`.  Returns null if `run`
/// is null.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_diagonals(run: *const UnitintRun) -> *const f64 {
    unsafe { run_buffer(run, |r| &r.diagonals) }
}

/// Real parts of the six upper off-diagonal entries, row-major `len x 6`,
/// pair order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).  Returns null if `run`
/// is null.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_offdiag_re(run: *const UnitintRun) -> *const f64 {
    unsafe { run_buffer(run, |r| &r.offdiag_re) }
}

/// Imaginary parts matching `unitint_run_offdiag_re`.  Returns null if
/// `run` is null.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_offdiag_im(run: *const UnitintRun) -> *const f64 {
    unsafe { run_buffer(run, |r| &r.offdiag_im) }
}

/// Von Neumann entropy at each sample (length `unitint_run_len`).
/// Returns null if `run` is null.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_entropy(run: *const UnitintRun) -> *const f64 {
    unsafe { run_buffer(run, |r| &r.entropy) }
}

/// Number of samples in a run (zero if `run` is null).
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_len(run: *const UnitintRun) -> usize {
    unsafe { run.as_ref() }.map_or(0, |r| r.x.len())
}

/// Largest Frobenius deviation from the brute-force propagator (NaN if
/// `run` is null).
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_oracle_deviation(run: *const UnitintRun) -> f64 {
    unsafe { run.as_ref() }.map_or(f64::NAN, |r| r.run.report.oracle_max_deviation)
}

/// Largest unitarity defect over all evolution samples (NaN if `run` is
/// null).
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_unitarity_defect(run: *const UnitintRun) -> f64 {
    unsafe { run.as_ref() }.map_or(f64::NAN, |r| r.run.report.max_unitarity_defect)
}

/// Number of restart segments the integration needed (zero if `run` is
/// null).
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_segment_count(run: *const UnitintRun) -> usize {
    unsafe { run.as_ref() }.map_or(0, |r| r.run.report.segment_count)
}

/// Write the run's CSV files and JSON report under `prefix`, exactly as
/// the command-line runner does.
///
/// # Safety
/// `run` must be a live run handle; `prefix` must be null or a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_write_outputs(
    run: *const UnitintRun,
    prefix: *const c_char,
) -> i32 {
    guarded(|| {
        let Some(r) = (unsafe { run.as_ref() }) else {
            set_error("run handle must not be null");
            return UNITINT_ERR_CONFIG;
        };
        let prefix = match unsafe { str_arg(prefix, "output prefix") } {
            Ok(p) => p,
            Err(code) => return code,
        };
        match r.run.write_outputs(prefix) {
            Ok(_) => UNITINT_OK,
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}

/// Release a run handle; a null pointer is ignored.
///
/// # Safety
/// `run` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn unitint_run_free(run: *mut UnitintRun) {
    if !run.is_null() {
        drop(unsafe { Box::from_raw(run) });
    }
}

/// Run the full structural verification suite (commutator table,
/// sub-algebra closures, pseudo-spin relations, coherence round trip).
/// Returns zero when every check passes; otherwise the number of failing
/// checks, with their names in the error message.
#[no_mangle]
pub extern "C" fn unitint_verify() -> i32 {
    guarded(|| {
        let report = run_verify();
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        if failing.is_empty() {
            UNITINT_OK
        } else {
            set_error(&format!("failing checks: {}", failing.join(", ")));
            i32::try_from(failing.len()).unwrap_or(i32::MAX)
        }
    })
}

/// Export the 15x15 commutator table as CSV to `path`.
///
/// # Safety
/// `path` must be null or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn unitint_export_table(path: *const c_char) -> i32 {
    guarded(|| {
        let path = match unsafe { str_arg(path, "output path") } {
            Ok(p) => p,
            Err(code) => return code,
        };
        match run_table_export(Path::new(path)) {
            Ok(()) => UNITINT_OK,
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}
