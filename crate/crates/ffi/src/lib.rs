//! C ABI over spectra-trace.
//!
//! Potentials and eigenvalue sets are opaque handles owned by the caller
//! and released with the matching `*_free`. Every fallible call returns a
//! [`StStatus`]; on failure [`st_last_error`] describes the cause for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64 as C64;
use spectra_trace::jost::{Jost, JostConfig, JostError};
use spectra_trace::locator::{locate_eigenvalues, EigenvalueSet, LocatorConfig, LocatorError};
use spectra_trace::potential::{PotentialError, PotentialSpec};
use spectra_trace::report::to_json;
use spectra_trace::traces::{self, TraceConfig, TraceError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// A tolerance could not be certified or a contour came too close to a zero.
    NumericalFailure = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StComplex {
    pub re: c_double,
    pub im: c_double,
}

impl From<C64> for StComplex {
    fn from(z: C64) -> Self {
        StComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StNorms {
    pub l1_norm: c_double,
    pub weighted_norm: c_double,
    pub q0: StComplex,
    pub big_q0: StComplex,
    /// NaN components when ∫q² diverges.
    pub big_q2: StComplex,
    pub r_c: c_double,
    pub rouche_a: c_double,
}

/// Opaque potential handle.
pub struct StPotential {
    spec: PotentialSpec,
}

/// Opaque eigenvalue set handle.
pub struct StEigenvalues {
    set: EigenvalueSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let s = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: StStatus, msg: impl std::fmt::Display) -> StStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> StStatus) -> StStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(StStatus::Panic, "internal panic"),
    }
}

fn potential_status(e: &PotentialError) -> StStatus {
    match e {
        PotentialError::Parse(_) => StStatus::ParseError,
        PotentialError::Divergent(_) => StStatus::NumericalFailure,
        _ => StStatus::InvalidArgument,
    }
}

fn jost_status(e: &JostError) -> StStatus {
    match e {
        JostError::InvalidMomentum { .. } => StStatus::InvalidArgument,
        _ => StStatus::NumericalFailure,
    }
}

fn locator_status(e: &LocatorError) -> StStatus {
    match e {
        LocatorError::Jost(j) => jost_status(j),
        _ => StStatus::NumericalFailure,
    }
}

fn trace_status(e: &TraceError) -> StStatus {
    match e {
        TraceError::Potential(p) => potential_status(p),
        TraceError::InvalidRadius { .. } => StStatus::InvalidArgument,
        TraceError::Locator(l) => locator_status(l),
        TraceError::Jost(j) => jost_status(j),
        _ => StStatus::NumericalFailure,
    }
}

unsafe fn potential_ref<'a>(p: *const StPotential) -> Option<&'a PotentialSpec> {
    p.as_ref().map(|h| &h.spec)
}

fn into_handle(spec: PotentialSpec, out: *mut *mut StPotential) -> StStatus {
    if let Err(e) = spec.validate() {
        return fail(potential_status(&e), e);
    }
    // SAFETY: checked non-null by the callers
    unsafe { *out = Box::into_raw(Box::new(StPotential { spec })) };
    StStatus::Ok
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a potential from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_potential_from_json(json: *const c_char, out: *mut *mut StPotential) -> StStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(StStatus::NullPointer, "null argument");
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(e) => return fail(StStatus::ParseError, e),
        };
        match PotentialSpec::from_json(text) {
            Ok(spec) => into_handle(spec, out),
            Err(e) => fail(potential_status(&e), e),
        }
    })
}

/// Constant complex height on [a, b].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_potential_box(
    height: StComplex,
    a: c_double,
    b: c_double,
    out: *mut *mut StPotential,
) -> StStatus {
    guard(|| {
        if out.is_null() {
            return fail(StStatus::NullPointer, "null argument");
        }
        into_handle(PotentialSpec::boxed(C64::new(height.re, height.im), a, b), out)
    })
}

/// c·t·x^{t²−1} on (0, 1).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_potential_paper_power(
    amplitude: StComplex,
    t: c_double,
    out: *mut *mut StPotential,
) -> StStatus {
    guard(|| {
        if out.is_null() {
            return fail(StStatus::NullPointer, "null argument");
        }
        into_handle(PotentialSpec::paper_power(C64::new(amplitude.re, amplitude.im), t), out)
    })
}

/// Piecewise-linear potential through (xs[i], qs[i]), zero outside.
///
/// # Safety
/// `xs` and `qs` must point to `n` elements each and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn st_potential_grid(
    xs: *const c_double,
    qs: *const StComplex,
    n: usize,
    out: *mut *mut StPotential,
) -> StStatus {
    guard(|| {
        if xs.is_null() || qs.is_null() || out.is_null() {
            return fail(StStatus::NullPointer, "null argument");
        }
        let x = std::slice::from_raw_parts(xs, n).to_vec();
        let q = std::slice::from_raw_parts(qs, n)
            .iter()
            .map(|z| C64::new(z.re, z.im))
            .collect();
        into_handle(PotentialSpec::grid(x, q), out)
    })
}

/// # Safety
/// `p` must come from a constructor of this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn st_potential_free(p: *mut StPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_norms(p: *const StPotential, out: *mut StNorms) -> StStatus {
    guard(|| {
        let (Some(q), false) = (potential_ref(p), out.is_null()) else {
            return fail(StStatus::NullPointer, "null argument");
        };
        let n = q.norms();
        *out = StNorms {
            l1_norm: n.l1_norm,
            weighted_norm: n.weighted_norm,
            q0: n.q0.into(),
            big_q0: n.big_q0.into(),
            big_q2: n.big_q2.map_or(
                StComplex {
                    re: f64::NAN,
                    im: f64::NAN,
                },
                Into::into,
            ),
            r_c: n.r_c,
            rouche_a: n.rouche_a,
        };
        StStatus::Ok
    })
}

/// w(k) = f₋f₊′ − f₋′f₊ at x = 0 with its error bound. `tol` ≤ 0 selects
/// the default.
///
/// # Safety
/// `p` must be a live handle; `w` and `err` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn st_wronskian(
    p: *const StPotential,
    k: StComplex,
    tol: c_double,
    w: *mut StComplex,
    err: *mut c_double,
) -> StStatus {
    guard(|| {
        let (Some(q), false, false) = (potential_ref(p), w.is_null(), err.is_null()) else {
            return fail(StStatus::NullPointer, "null argument");
        };
        let mut cfg = JostConfig::default();
        if tol > 0.0 {
            cfg.tol = tol;
        }
        match Jost::new(q, cfg).wronskian(C64::new(k.re, k.im)) {
            Ok(e) => {
                *w = e.w.into();
                *err = e.err;
                StStatus::Ok
            }
            Err(e) => fail(jost_status(&e), e),
        }
    })
}

/// Eigenvalue momenta in the upper half-plane.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_locate_eigenvalues(p: *const StPotential, out: *mut *mut StEigenvalues) -> StStatus {
    guard(|| {
        let (Some(q), false) = (potential_ref(p), out.is_null()) else {
            return fail(StStatus::NullPointer, "null argument");
        };
        match locate_eigenvalues(q, &LocatorConfig::default()) {
            Ok(set) => {
                *out = Box::into_raw(Box::new(StEigenvalues { set }));
                StStatus::Ok
            }
            Err(e) => fail(locator_status(&e), e),
        }
    })
}

/// Number of distinct eigenvalues (0 for NULL).
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_eigenvalues_len(s: *const StEigenvalues) -> usize {
    s.as_ref().map_or(0, |h| h.set.eigenvalues.len())
}

/// # Safety
/// `s` must be a live handle; `k` and `multiplicity` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn st_eigenvalues_get(
    s: *const StEigenvalues,
    index: usize,
    k: *mut StComplex,
    multiplicity: *mut u32,
) -> StStatus {
    guard(|| {
        let (Some(h), false, false) = (s.as_ref(), k.is_null(), multiplicity.is_null()) else {
            return fail(StStatus::NullPointer, "null argument");
        };
        match h.set.eigenvalues.get(index) {
            Some(e) => {
                *k = e.k.into();
                *multiplicity = e.multiplicity as u32;
                StStatus::Ok
            }
            None => fail(
                StStatus::OutOfRange,
                format!("index {index} >= {}", h.set.eigenvalues.len()),
            ),
        }
    })
}

/// # Safety
/// `s` must come from `st_locate_eigenvalues` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn st_eigenvalues_free(s: *mut StEigenvalues) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// J₀ = (1/π)∫₀^∞ log|ψ(t)ψ(−t)| dt. `tol` ≤ 0 selects the default.
///
/// # Safety
/// `p` must be a live handle; `value` and `err` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn st_j0(
    p: *const StPotential,
    tol: c_double,
    value: *mut c_double,
    err: *mut c_double,
) -> StStatus {
    guard(|| {
        let (Some(q), false, false) = (potential_ref(p), value.is_null(), err.is_null()) else {
            return fail(StStatus::NullPointer, "null argument");
        };
        let mut cfg = TraceConfig::default();
        if tol > 0.0 {
            cfg.tol = tol;
        }
        match traces::j0(q, &cfg) {
            Ok(j) => {
                *value = j.value;
                *err = j.err;
                StStatus::Ok
            }
            Err(e) => fail(trace_status(&e), e),
        }
    })
}

/// Full trace report as JSON; release with `st_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_trace_report_json(p: *const StPotential, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let (Some(q), false) = (potential_ref(p), out.is_null()) else {
            return fail(StStatus::NullPointer, "null argument");
        };
        match traces::trace_report(q, &TraceConfig::default()) {
            Ok(r) => match CString::new(to_json(&r)) {
                Ok(s) => {
                    *out = s.into_raw();
                    StStatus::Ok
                }
                Err(e) => fail(StStatus::Panic, e),
            },
            Err(e) => fail(trace_status(&e), e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
