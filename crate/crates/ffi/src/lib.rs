//! C interface for the movable antenna array optimizer.
//!
//! Conventions, which the generated `include/maa.h` restates:
//!
//! - Handles (`MaaScenario`, `MaaConfig`, `MaaRunResult`) are opaque. They
//!   are created and destroyed only by this library; the `*_free` functions
//!   accept null.
//! - Fallible calls return [`MaaStatus`]. Out-parameters are written only on
//!   `MAA_OK`.
//! - After any failure, [`maa_last_error_message`] returns a description.
//!   The message is thread local and stays valid until the next failing call
//!   on the same thread.
//! - Panics never unwind across the boundary; they surface as `MAA_PANIC`.
//!
//! Scenario and config JSON use the same schema as the command line tool, so
//! a scenario file from disk can be passed through unchanged.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use maa_opt::array::{beamforming_gain, BeamformingVector, PositionVector};
use maa_opt::firefly::{self, FaConfig, RunResult};
use maa_opt::problem::Scenario;
use num_complex::Complex64;

/// Result code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaaStatus {
    /// The call succeeded; all out-parameters were written.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input could not be parsed or failed validation; see
    /// [`maa_last_error_message`].
    InvalidInput = 2,
    /// A panic was caught at the boundary. State may be incomplete; see
    /// [`maa_last_error_message`].
    Panic = 3,
}

/// Opaque handle to a validated problem description.
pub struct MaaScenario {
    inner: Scenario,
}

/// Opaque handle to a search configuration.
pub struct MaaConfig {
    inner: FaConfig,
}

/// Opaque handle to the outcome of one search run.
pub struct MaaRunResult {
    inner: RunResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Display) {
    let text = message.to_string();
    let owned = CString::new(text)
        .unwrap_or_else(|_| CString::new("error message contained a nul byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn invalid(message: impl Display) -> MaaStatus {
    set_error(message);
    MaaStatus::InvalidInput
}

/// Runs `body` with panics converted to [`MaaStatus::Panic`].
fn guarded(body: impl FnOnce() -> MaaStatus) -> MaaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic payload".to_owned());
            set_error(format!("panic caught at the C boundary: {what}"));
            MaaStatus::Panic
        }
    }
}

macro_rules! require {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error(concat!(stringify!($ptr), " must not be null"));
            return MaaStatus::NullArgument;
        }
    };
}

/// Reads a C string as UTF-8 JSON and deserializes it.
///
/// # Safety
/// `json` must point to a NUL-terminated string.
unsafe fn parse_json<T: serde::de::DeserializeOwned>(
    json: *const c_char,
    what: &str,
) -> Result<T, MaaStatus> {
    let text = CStr::from_ptr(json)
        .to_str()
        .map_err(|e| invalid(format!("{what} JSON is not UTF-8: {e}")))?;
    serde_json::from_str(text).map_err(|e| invalid(format!("cannot parse {what}: {e}")))
}

/// Message for the most recent failure on this thread, or null if nothing
/// has failed yet. Do not free; the pointer is invalidated by the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn maa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn maa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a scenario from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_scenario_from_json(
    json: *const c_char,
    out: *mut *mut MaaScenario,
) -> MaaStatus {
    guarded(|| {
        require!(json);
        require!(out);
        let scenario: Scenario = match parse_json(json, "scenario") {
            Ok(s) => s,
            Err(status) => return status,
        };
        if let Err(e) = scenario.validate() {
            return invalid(e);
        }
        out.write(Box::into_raw(Box::new(MaaScenario { inner: scenario })));
        MaaStatus::Ok
    })
}

/// Destroys a scenario handle; accepts null.
///
/// # Safety
/// `scenario` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn maa_scenario_free(scenario: *mut MaaScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Creates the default search configuration (the reference setup: 40
/// fireflies, 500 generations, growing penalty multipliers).
///
/// # Safety
/// `out` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_config_default(out: *mut *mut MaaConfig) -> MaaStatus {
    guarded(|| {
        require!(out);
        out.write(Box::into_raw(Box::new(MaaConfig {
            inner: FaConfig::default(),
        })));
        MaaStatus::Ok
    })
}

/// Parses a search configuration from JSON. Missing keys take their default
/// values, so `"{}"` is the default configuration and
/// `"{\"rng_seed\": 7}"` overrides only the seed.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_config_from_json(
    json: *const c_char,
    out: *mut *mut MaaConfig,
) -> MaaStatus {
    guarded(|| {
        require!(json);
        require!(out);
        let config: FaConfig = match parse_json(json, "config") {
            Ok(c) => c,
            Err(status) => return status,
        };
        if let Err(e) = config.validate() {
            return invalid(e);
        }
        out.write(Box::into_raw(Box::new(MaaConfig { inner: config })));
        MaaStatus::Ok
    })
}

/// Destroys a config handle; accepts null.
///
/// # Safety
/// `config` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn maa_config_free(config: *mut MaaConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the full search and returns a result handle. Deterministic for a
/// fixed scenario, config, and seed.
///
/// # Safety
/// `scenario` and `config` must be live handles and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_run(
    scenario: *const MaaScenario,
    config: *const MaaConfig,
    out: *mut *mut MaaRunResult,
) -> MaaStatus {
    guarded(|| {
        require!(scenario);
        require!(config);
        require!(out);
        match firefly::run(&(*scenario).inner, &(*config).inner) {
            Ok(result) => {
                out.write(Box::into_raw(Box::new(MaaRunResult { inner: result })));
                MaaStatus::Ok
            }
            Err(e) => invalid(e),
        }
    })
}

/// Destroys a result handle; accepts null.
///
/// # Safety
/// `result` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn maa_result_free(result: *mut MaaRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Worst-case gain over the intended directions at the best candidate.
///
/// # Safety
/// `result` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_result_best_min_gain(
    result: *const MaaRunResult,
    out: *mut f64,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out);
        out.write((*result).inner.best_min_gain);
        MaaStatus::Ok
    })
}

/// Whether the best candidate satisfies every constraint within tolerance.
///
/// # Safety
/// `result` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_result_feasible(
    result: *const MaaRunResult,
    out: *mut bool,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out);
        out.write((*result).inner.feasibility.feasible);
        MaaStatus::Ok
    })
}

/// Number of brightness evaluations the run spent.
///
/// # Safety
/// `result` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_result_evaluations(
    result: *const MaaRunResult,
    out: *mut u64,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out);
        out.write((*result).inner.evaluations);
        MaaStatus::Ok
    })
}

/// Number of antennas in the best candidate, which is the buffer length the
/// position and weight accessors expect.
///
/// # Safety
/// `result` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_result_antenna_count(
    result: *const MaaRunResult,
    out: *mut usize,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out);
        out.write((*result).inner.best.d.len());
        MaaStatus::Ok
    })
}

/// Copies the best antenna positions (in wavelengths, ascending) into
/// `out[0..len]`. `len` must equal the antenna count.
///
/// # Safety
/// `result` must be a live handle and `out` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn maa_result_positions(
    result: *const MaaRunResult,
    out: *mut f64,
    len: usize,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out);
        let d = (*result).inner.best.d.as_slice();
        if len != d.len() {
            return invalid(format!(
                "buffer holds {len} positions, result has {}",
                d.len()
            ));
        }
        ptr::copy_nonoverlapping(d.as_ptr(), out, len);
        MaaStatus::Ok
    })
}

/// Copies the best beamforming weights into `out_re[0..len]` and
/// `out_im[0..len]`. `len` must equal the antenna count.
///
/// # Safety
/// `result` must be a live handle; each buffer must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn maa_result_weights(
    result: *const MaaRunResult,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out_re);
        require!(out_im);
        let w = (*result).inner.best.w.as_slice();
        if len != w.len() {
            return invalid(format!(
                "buffer holds {len} weights, result has {}",
                w.len()
            ));
        }
        for (i, v) in w.iter().enumerate() {
            out_re.add(i).write(v.re);
            out_im.add(i).write(v.im);
        }
        MaaStatus::Ok
    })
}

/// Serializes the full result (best candidate, feasibility report, per
/// generation trace, evaluation count) to a JSON string. Free the string
/// with [`maa_string_free`]. The layout matches the `result` field of the
/// command line tool's result file.
///
/// # Safety
/// `result` must be a live handle and `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn maa_result_to_json(
    result: *const MaaRunResult,
    out: *mut *mut c_char,
) -> MaaStatus {
    guarded(|| {
        require!(result);
        require!(out);
        let text = match serde_json::to_string(&(*result).inner) {
            Ok(t) => t,
            Err(e) => return invalid(format!("cannot serialize result: {e}")),
        };
        match CString::new(text) {
            Ok(owned) => {
                out.write(owned.into_raw());
                MaaStatus::Ok
            }
            Err(e) => invalid(format!("serialized result contained a nul byte: {e}")),
        }
    })
}

/// Frees a string returned by this library; accepts null.
///
/// # Safety
/// `s` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn maa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Beamforming gain `|w^H s(d, theta)|^2` for an arbitrary weighting and
/// placement, without a scenario or a search. Weights are split into real
/// and imaginary parts; positions are in wavelengths; `theta_deg` is the
/// direction in `[0, 180]`.
///
/// # Safety
/// The three array arguments must each point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn maa_beamforming_gain(
    weights_re: *const f64,
    weights_im: *const f64,
    positions_wl: *const f64,
    len: usize,
    theta_deg: f64,
    out: *mut f64,
) -> MaaStatus {
    guarded(|| {
        require!(weights_re);
        require!(weights_im);
        require!(positions_wl);
        require!(out);
        if len == 0 {
            return invalid("len must be at least 1");
        }
        let re = slice::from_raw_parts(weights_re, len);
        let im = slice::from_raw_parts(weights_im, len);
        let d = slice::from_raw_parts(positions_wl, len);
        let weights = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let gain = BeamformingVector::new(weights)
            .and_then(|w| Ok((w, PositionVector::new(d.to_vec())?)))
            .and_then(|(w, p)| beamforming_gain(&w, &p, theta_deg));
        match gain {
            Ok(g) => {
                out.write(g);
                MaaStatus::Ok
            }
            Err(e) => invalid(e),
        }
    })
}
