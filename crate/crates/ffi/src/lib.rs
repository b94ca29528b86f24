//! C ABI over the explanation-search engine.
//!
//! Conventions:
//! - Every fallible call returns an [`EsStatus`] code and writes its result
//!   through an out pointer, which is left untouched on failure.
//! - Priors are opaque handles created by `es_prior_*` constructors and
//!   released with [`es_prior_free`]. Handles are immutable; updates return
//!   a new handle.
//! - Strings returned by the library are NUL-terminated UTF-8 owned by the
//!   caller and must be released with [`es_string_free`].
//! - [`es_last_error_message`] returns a thread-local description of the
//!   most recent failure.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;

use explanation_search::analytic;
use explanation_search::belief::{myopic_stop_time, CostFunction, OverlapPrior};
use explanation_search::experiments::{monte_carlo, ExperimentConfig};
use explanation_search::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsStatus {
    Ok = 0,
    /// A pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or malformed.
    InvalidArgument = 2,
    /// The requested overlap placement cannot be satisfied.
    InfeasiblePlacement = 3,
    /// Internal failure (including caught panics).
    Internal = 4,
}

/// Opaque belief state over the overlap size.
pub struct EsPrior(OverlapPrior);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> EsStatus {
    match err {
        Error::InvalidArgument(_) | Error::InvalidState(_) | Error::ImpossibleFailure { .. } => {
            EsStatus::InvalidArgument
        }
        Error::InfeasiblePlacement(_) => EsStatus::InfeasiblePlacement,
        _ => EsStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guarded(f: impl FnOnce() -> Result<(), (EsStatus, String)>) -> EsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside library call".into());
            EsStatus::Internal
        }
    }
}

fn from_err(err: Error) -> (EsStatus, String) {
    (status_of(&err), err.to_string())
}

fn null_err() -> (EsStatus, String) {
    (EsStatus::NullPointer, "null pointer argument".into())
}

/// Message for the most recent failure on this thread, or null if the last
/// call succeeded. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn es_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Expected number of draws until the first explanatory node is found when
/// sampling uniformly without replacement. `n_k` of the `n_r - 1` non-target
/// nodes are explanatory.
#[no_mangle]
pub extern "C" fn es_expected_time(n_r: usize, n_k: usize, out: *mut f64) -> EsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err());
        }
        let v = analytic::expected_explanation_time(n_r, n_k).map_err(from_err)?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Number of pmf entries for the success-time distribution: support is
/// `1..=n_r - n_k`.
#[no_mangle]
pub extern "C" fn es_time_pmf_len(n_r: usize, n_k: usize, out: *mut usize) -> EsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err());
        }
        let dist = analytic::time_pmf(n_r, n_k).map_err(from_err)?;
        unsafe { *out = dist.support_max() };
        Ok(())
    })
}

/// Writes the success-time pmf into `out`, which must hold `len` doubles
/// with `len` equal to `es_time_pmf_len`. Entry `i` is the probability that
/// the first explanatory node is drawn at step `i + 1`.
#[no_mangle]
pub extern "C" fn es_time_pmf(n_r: usize, n_k: usize, out: *mut f64, len: usize) -> EsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err());
        }
        let dist = analytic::time_pmf(n_r, n_k).map_err(from_err)?;
        if len != dist.support_max() {
            return Err((
                EsStatus::InvalidArgument,
                format!("pmf buffer holds {len} entries, need {}", dist.support_max()),
            ));
        }
        let pmf = dist.pmf();
        unsafe { std::ptr::copy_nonoverlapping(pmf.as_ptr(), out, len) };
        Ok(())
    })
}

/// Probability that a searcher who stops after `t_stop` unsuccessful draws
/// never finds an explanatory node.
#[no_mangle]
pub extern "C" fn es_abandonment_probability(
    n_r: usize,
    n_k: usize,
    t_stop: usize,
    out: *mut f64,
) -> EsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err());
        }
        let v = analytic::abandonment_probability(n_r, n_k, t_stop).map_err(from_err)?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Uniform prior over overlap sizes `0..=n_r - 1`.
#[no_mangle]
pub extern "C" fn es_prior_uniform(n_r: usize, out: *mut *mut EsPrior) -> EsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err());
        }
        let prior = OverlapPrior::uniform(n_r).map_err(from_err)?;
        unsafe { *out = Box::into_raw(Box::new(EsPrior(prior))) };
        Ok(())
    })
}

/// Normal density with the given mean and variance, discretised on
/// `0..=max_size` and renormalised.
#[no_mangle]
pub extern "C" fn es_prior_truncated_normal(
    mean: f64,
    variance: f64,
    max_size: usize,
    out: *mut *mut EsPrior,
) -> EsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err());
        }
        let prior = OverlapPrior::truncated_normal(mean, variance, max_size).map_err(from_err)?;
        unsafe { *out = Box::into_raw(Box::new(EsPrior(prior))) };
        Ok(())
    })
}

/// Prior from explicit non-negative masses over sizes `0..len - 1`;
/// masses are renormalised.
#[no_mangle]
pub extern "C" fn es_prior_from_masses(
    masses: *const f64,
    len: usize,
    out: *mut *mut EsPrior,
) -> EsStatus {
    guarded(|| {
        if masses.is_null() || out.is_null() {
            return Err(null_err());
        }
        let slice = unsafe { std::slice::from_raw_parts(masses, len) };
        let prior = OverlapPrior::from_masses(slice.to_vec()).map_err(from_err)?;
        unsafe { *out = Box::into_raw(Box::new(EsPrior(prior))) };
        Ok(())
    })
}

/// Releases a prior handle. Null is ignored.
#[no_mangle]
pub extern "C" fn es_prior_free(prior: *mut EsPrior) {
    if !prior.is_null() {
        drop(unsafe { Box::from_raw(prior) });
    }
}

/// Mean overlap size under the prior.
#[no_mangle]
pub extern "C" fn es_prior_mean(prior: *const EsPrior, out: *mut f64) -> EsStatus {
    guarded(|| {
        if prior.is_null() || out.is_null() {
            return Err(null_err());
        }
        unsafe { *out = (*prior).0.mean() };
        Ok(())
    })
}

/// Expected benefit of the next draw: `b * mean / pool`, where `pool` is
/// the number of unvisited non-target nodes.
#[no_mangle]
pub extern "C" fn es_prior_expected_benefit(
    prior: *const EsPrior,
    pool: usize,
    b: f64,
    out: *mut f64,
) -> EsStatus {
    guarded(|| {
        if prior.is_null() || out.is_null() {
            return Err(null_err());
        }
        let v = unsafe { &(*prior).0 }
            .expected_benefit(pool, b)
            .map_err(from_err)?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Posterior after one failed draw from a pool of `pool` candidates,
/// returned as a new handle.
#[no_mangle]
pub extern "C" fn es_prior_after_failure(
    prior: *const EsPrior,
    pool: usize,
    out: *mut *mut EsPrior,
) -> EsStatus {
    guarded(|| {
        if prior.is_null() || out.is_null() {
            return Err(null_err());
        }
        let next = unsafe { &(*prior).0 }.after_failure(pool).map_err(from_err)?;
        unsafe { *out = Box::into_raw(Box::new(EsPrior(next))) };
        Ok(())
    })
}

/// First step `t` in `1..=n_r - 1` at which the expected benefit of draw
/// `t` no longer exceeds the constant per-draw cost `c`. Writes 0 to `out`
/// when no such step exists within the horizon.
#[no_mangle]
pub extern "C" fn es_myopic_stop_time(
    prior: *const EsPrior,
    n_r: usize,
    b: f64,
    c: f64,
    out: *mut usize,
) -> EsStatus {
    guarded(|| {
        if prior.is_null() || out.is_null() {
            return Err(null_err());
        }
        let cost = CostFunction::Constant { c };
        let stop = myopic_stop_time(unsafe { &(*prior).0 }, n_r, b, &cost)
            .map_err(from_err)?;
        unsafe { *out = stop.unwrap_or(0) };
        Ok(())
    })
}

/// Runs a replicated simulation described by a JSON experiment config and
/// returns the full output (summary plus per-episode records) as JSON.
/// The returned string must be released with `es_string_free`.
#[no_mangle]
pub extern "C" fn es_simulate_json(
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> EsStatus {
    guarded(|| {
        if config_json.is_null() || out.is_null() {
            return Err(null_err());
        }
        let raw = unsafe { CStr::from_ptr(config_json) }
            .to_str()
            .map_err(|e| (EsStatus::InvalidArgument, format!("config is not UTF-8: {e}")))?;
        let config: ExperimentConfig = serde_json::from_str(raw)
            .map_err(|e| (EsStatus::InvalidArgument, format!("bad config: {e}")))?;
        let output = monte_carlo(&config).map_err(from_err)?;
        let json = serde_json::to_string(&output)
            .map_err(|e| (EsStatus::Internal, e.to_string()))?;
        let c = CString::new(json)
            .map_err(|e| (EsStatus::Internal, e.to_string()))?;
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub extern "C" fn es_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
