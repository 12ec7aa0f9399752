//! C interface to `toricsod`.
//!
//! Fans live behind opaque handles that the caller frees. Every
//! function returns a [`TsStatus`]; on failure a message is available from
//! [`ts_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toricsod::cli::report;
use toricsod::hjfrac::SingularityType;
use toricsod::kkalg::{kk_presentation, monomial_basis};
use toricsod::sodbuilder::{sod_report, PointOrdering};
use toricsod::toricfan::{brauer_from_rays, validate_fan, wpp_fan, Fan};
use toricsod::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidFan = 2,
    InvalidArgument = 3,
    Obstruction = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsReportKind {
    Analyze = 0,
    Resolve = 1,
    Sod = 2,
    Brauer = 3,
    Generators = 4,
}

/// Opaque handle to a validated complete fan.
pub struct TsFan(Fan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TsStatus {
    match e {
        Error::TooFewRays(_)
        | Error::NonPrimitiveRay { .. }
        | Error::NonConvexOrClockwise { .. }
        | Error::WrongWinding(_) => TsStatus::InvalidFan,
        Error::ObstructionPresent => TsStatus::Obstruction,
        Error::InvalidWeights
        | Error::NotCoprime
        | Error::InvalidType { .. }
        | Error::SmoothPoint
        | Error::InvalidDigits
        | Error::InvalidOrdering(_)
        | Error::LengthMismatch { .. } => TsStatus::InvalidArgument,
        _ => TsStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (TsStatus, String)>) -> TsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside toricsod");
            TsStatus::Panic
        }
    }
}

fn lib<T>(r: toricsod::Result<T>) -> Result<T, (TsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (TsStatus, String) {
    (TsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn fan_ref<'a>(fan: *const TsFan) -> Result<&'a Fan, (TsStatus, String)> {
    fan.as_ref().map(|f| &f.0).ok_or_else(null)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a fan from `n` rays stored as `xy[2k], xy[2k+1]`, counterclockwise.
///
/// # Safety
/// `xy` must point to `2 * n` readable integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_fan_new(xy: *const i64, n: usize, out: *mut *mut TsFan) -> TsStatus {
    guard(|| {
        if xy.is_null() || out.is_null() {
            return Err(null());
        }
        let flat = std::slice::from_raw_parts(xy, 2 * n);
        let rays: Vec<[i64; 2]> = flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
        let fan = lib(validate_fan(&rays))?;
        *out = Box::into_raw(Box::new(TsFan(fan)));
        Ok(())
    })
}

/// Fan of the weighted projective plane with weights `(w0, w1, w2)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_fan_weighted(w0: i64, w1: i64, w2: i64, out: *mut *mut TsFan) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let fan = lib(wpp_fan([w0, w1, w2]))?.fan;
        *out = Box::into_raw(Box::new(TsFan(fan)));
        Ok(())
    })
}

/// # Safety
/// `fan` must come from a constructor here and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_fan_free(fan: *mut TsFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_fan_ray_count(fan: *const TsFan, out: *mut usize) -> TsStatus {
    guard(|| {
        let f = fan_ref(fan)?;
        *out.as_mut().ok_or_else(null)? = f.len();
        Ok(())
    })
}

/// Order of the Brauer group.
///
/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_fan_brauer_order(fan: *const TsFan, out: *mut u64) -> TsStatus {
    guard(|| {
        let f = fan_ref(fan)?;
        let order = brauer_from_rays(f).order().unwrap_or_default();
        let v = u64::try_from(order).map_err(|_| (TsStatus::Internal, "order overflows u64".into()))?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// Writes true to `out` when the decomposition needs no Brauer twist.
///
/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_fan_is_untwisted(fan: *const TsFan, out: *mut bool) -> TsStatus {
    guard(|| {
        let f = fan_ref(fan)?;
        *out.as_mut().ok_or_else(null)? = sod_report(f, PointOrdering::identity()).is_untwisted();
        Ok(())
    })
}

/// Dimension of the algebra attached to `1/r(1,a)`, counted from its monomial basis.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_kk_dimension(r: i64, a: i64, out: *mut usize) -> TsStatus {
    guard(|| {
        let t = lib(SingularityType::new(r, a))?;
        let n = lib(monomial_basis(&kk_presentation(t)))?.len();
        *out.as_mut().ok_or_else(null)? = n;
        Ok(())
    })
}

/// JSON report for the fan, the same document the command line prints.
/// Points are taken after rotating by `rotate` and optionally reflecting.
/// Free the string with [`ts_string_free`].
///
/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_report_json(
    fan: *const TsFan,
    kind: TsReportKind,
    rotate: usize,
    reflect: bool,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let f = fan_ref(fan)?;
        let out = out.as_mut().ok_or_else(null)?;
        if rotate >= f.len() {
            return lib(Err(Error::InvalidOrdering(format!("rotation {rotate} with {} points", f.len()))));
        }
        let o = PointOrdering { rotate, reflect };
        let r = match kind {
            TsReportKind::Analyze => report::analyze(f, o),
            TsReportKind::Resolve => report::resolve(f, o),
            TsReportKind::Sod => report::sod(&sod_report(f, o)),
            TsReportKind::Brauer => report::brauer(&sod_report(f, o)),
            TsReportKind::Generators => lib(report::generators(f, o))?,
        };
        let text = serde_json::to_string_pretty(&r.json).map_err(|e| (TsStatus::Internal, e.to_string()))?;
        *out = into_c_string(text);
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
