//! C ABI over `trigroup`.
//!
//! Presentations are opaque `TgPresentation` handles created by the
//! `tg_presentation_*` constructors and released with
//! `tg_presentation_free`. Every fallible call returns a `TgStatus`; on
//! failure `tg_last_error_message` describes the most recent error on the
//! calling thread. Strings returned by the library must be released with
//! `tg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trigroup::harness::{classify_trial, FreeVerdict, TVerdict, Thresholds};
use trigroup::linkgraph::build_link_graph;
use trigroup::spectra::{spectral_gap, SpectralError};
use trigroup::words::{parse_presentation, sample_binomial, sample_uniform, Presentation};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Solver = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// Outcome of the spectral (T) test.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgTStatus {
    Certified = 0,
    Inconclusive = 1,
    Skipped = 2,
    Failed = 3,
}

/// Opaque presentation handle.
pub struct TgPresentation(Presentation);

/// Flat summary of a trial verdict.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TgVerdict {
    pub generators: u32,
    pub relations: u64,
    pub free_certified: bool,
    /// Rank of the free group; 0 unless `free_certified`.
    pub rank: u32,
    pub chi: i64,
    pub chi_witness: bool,
    pub isolated_count: u64,
    pub connected: bool,
    pub t_status: TgTStatus,
    /// NaN when the spectrum was not computed.
    pub lambda2: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    let c = CString::new(message).expect("interior NULs were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guarded(f: impl FnOnce() -> Result<(), (TgStatus, String)>) -> TgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TgStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TgStatus::Panic
        }
    }
}

fn null(what: &str) -> (TgStatus, String) {
    (TgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn store(out: *mut *mut TgPresentation, p: Presentation) {
    *out = Box::into_raw(Box::new(TgPresentation(p)));
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse the text presentation format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_parse(
    text: *const c_char,
    out: *mut *mut TgPresentation,
) -> TgStatus {
    guarded(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (TgStatus::InvalidUtf8, e.to_string()))?;
        let p = parse_presentation(s).map_err(|e| (TgStatus::Parse, e.to_string()))?;
        store(out, p);
        Ok(())
    })
}

/// Sample from the binomial model: each relator kept with probability `p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_sample_binomial(
    n: u32,
    p: f64,
    seed: u64,
    out: *mut *mut TgPresentation,
) -> TgStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pres =
            sample_binomial(n, p, seed).map_err(|e| (TgStatus::InvalidArgument, e.to_string()))?;
        store(out, pres);
        Ok(())
    })
}

/// Sample exactly `t` distinct relators uniformly.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_sample_uniform(
    n: u32,
    t: u64,
    seed: u64,
    out: *mut *mut TgPresentation,
) -> TgStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pres =
            sample_uniform(n, t, seed).map_err(|e| (TgStatus::InvalidArgument, e.to_string()))?;
        store(out, pres);
        Ok(())
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `p` must come from a `tg_presentation_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_free(p: *mut TgPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of generators, or 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_generator_count(p: *const TgPresentation) -> u32 {
    p.as_ref().map_or(0, |p| p.0.n())
}

/// Number of relators, or 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_relation_count(p: *const TgPresentation) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Serialize to the text format. Free the result with `tg_string_free`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_presentation_serialize(
    p: *const TgPresentation,
    out: *mut *mut c_char,
) -> TgStatus {
    guarded(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(p.0.to_string())
            .map_err(|e| (TgStatus::InvalidArgument, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Run every certifier and witness on `p`.
///
/// A solver failure is reported in `out->t_status` rather than the return
/// code, so the rest of the verdict stays usable.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_classify(
    p: *const TgPresentation,
    margin: f64,
    spectra: bool,
    out: *mut TgVerdict,
) -> TgStatus {
    guarded(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !margin.is_finite() || margin < 0.0 {
            return Err((
                TgStatus::InvalidArgument,
                format!("margin {margin} must be finite and non-negative"),
            ));
        }
        let v = classify_trial(
            &p.0,
            &Thresholds {
                margin,
                spectra,
                timing: false,
            },
        );
        let (free_certified, rank) = match v.free {
            FreeVerdict::Certified { rank } => (true, rank),
            FreeVerdict::Inconclusive => (false, 0),
        };
        let t_status = match &v.t_cert {
            TVerdict::Certified { .. } => TgTStatus::Certified,
            TVerdict::Inconclusive { .. } => TgTStatus::Inconclusive,
            TVerdict::Skipped { .. } => TgTStatus::Skipped,
            TVerdict::Failed { error, .. } => {
                set_error(error.clone());
                TgTStatus::Failed
            }
        };
        *out = TgVerdict {
            generators: v.n,
            relations: v.stats.relations as u64,
            free_certified,
            rank,
            chi: v.chi,
            chi_witness: v.not_free_witness.is_some(),
            isolated_count: v
                .not_t_witness
                .as_ref()
                .map_or(0, |w| w.generators.len() as u64),
            connected: v.t_cert.connected(),
            t_status,
            lambda2: v.t_cert.lambda2().unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Second-smallest eigenvalue of the link graph's normalized Laplacian.
///
/// # Safety
/// `p` must be a live handle; `lambda2` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_spectral_gap(p: *const TgPresentation, lambda2: *mut f64) -> TgStatus {
    guarded(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        if lambda2.is_null() {
            return Err(null("lambda2"));
        }
        let report = spectral_gap(&build_link_graph(&p.0))
            .map_err(|e: SpectralError| (TgStatus::Solver, e.to_string()))?;
        *lambda2 = report.lambda2;
        Ok(())
    })
}
